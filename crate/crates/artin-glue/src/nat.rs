//! Natural transformations as intensional component rules, including the
//! unit/counit families of every adjunction this crate constructs and the
//! derived cells used by the extension calculus.

use crate::cat::{comp, Cat, CatError, Mor, Obj};
use crate::ext::{ExtMorphism, Extension};
use crate::functor::{nary_product, nary_product_mediate, phi_inv_square, Functor, FunctorKind};
use crate::presheaf::{self, canonicalize, Subterminal};
use std::collections::BTreeMap;
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatKind {
    Identity(Functor),
    /// Identity components between two functors that agree pointwise.
    IdentityBetween(Functor, Functor),
    /// `VComp(b, a)` is `b` after `a`.
    VComp(NatTrans, NatTrans),
    WhiskerLeft(Functor, NatTrans),
    WhiskerRight(NatTrans, Functor),
    Inverse(NatTrans),
    /// The unique transformation into the constant-terminal functor.
    Bang(Functor),
    /// Components found by hom search between terminal-like values.
    UniqueIso { from: Functor, to: Functor },
    /// theta : Id -> E_* E for the open reflection at `u`.
    OpenUnit { topos: Cat, u: Obj },
    /// epsilon : E E_* -> Id on the slice.
    OpenCounit { topos: Cat, u: Obj },
    /// zeta : Id -> K K* for the closed reflection at `u`.
    ClosedUnit { topos: Cat, u: Obj },
    /// delta : K* K -> Id on the kernel.
    ClosedCounit { topos: Cat, u: Obj },
    /// theta' : Id -> pi2* pi2 on a glueing, componentwise `(ell, id)`.
    GlTheta(Cat),
    /// epsilon' : pi2 pi2* -> Id, identity components.
    GlEpsilon(Cat),
    /// zeta' : Id -> pi1* pi1, componentwise `(id, !)`.
    GlZeta(Cat),
    /// delta' : pi1 pi1* -> Id, identity components.
    GlDelta(Cat),
    /// alpha : pi1* -> Phi K.
    PhiAlpha(Rc<Extension>),
    /// gamma : pi2* -> Phi E_*.
    PhiGamma(Rc<Extension>),
    /// Id -> PhiInv Phi, the comparison into the representing pullback.
    PhiUnit(Rc<Extension>),
    /// Phi PhiInv -> Id.
    PhiCounit(Rc<Extension>),
    /// alpha for the pullback-built morphism of a transformation.
    GammaAlpha(NatTrans),
    /// gamma for the pullback-built morphism of a transformation.
    GammaGamma(NatTrans),
    /// Id -> GammaPsi PsiStar.
    PsiStarUnit(NatTrans),
    /// PsiStar GammaPsi -> Id.
    PsiStarCounit(NatTrans),
    /// The unique 2-cell between two parallel extension morphisms, built by
    /// mediating through the representing pullback.
    ExtTwoCell { m1: Rc<ExtMorphism>, m2: Rc<ExtMorphism> },
    /// Projection out of a pointwise product of functors.
    ProductProj { product: Functor, index: usize },
    /// Tupling into a pointwise product of functors.
    ProductTuple { product: Functor, components: Vec<NatTrans> },
    /// Inclusion of a pointwise equalizer into its source.
    EqualizerIncl { eq: Functor },
    /// Corestriction of an equalizing transformation through the equalizer.
    EqualizerTuple { eq: Functor, through: NatTrans },
    /// Extensional components on canonical presheaf objects, extended to
    /// arbitrary objects by transport along the canonical relabelling.
    Table(Rc<TableNat>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableNat {
    pub source: Functor,
    pub target: Functor,
    /// Components at canonical objects.
    pub entries: BTreeMap<Obj, Mor>,
}

#[derive(Clone, Debug)]
pub struct NatTrans(Rc<NatKind>);

impl PartialEq for NatTrans {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for NatTrans {}

impl NatTrans {
    fn mk(kind: NatKind) -> NatTrans {
        NatTrans(Rc::new(kind))
    }

    pub fn kind(&self) -> &NatKind {
        &self.0
    }

    pub fn identity(f: &Functor) -> NatTrans {
        NatTrans::mk(NatKind::Identity(f.clone()))
    }

    pub fn identity_between(f: &Functor, g: &Functor) -> NatTrans {
        if f == g {
            NatTrans::identity(f)
        } else {
            NatTrans::mk(NatKind::IdentityBetween(f.clone(), g.clone()))
        }
    }

    pub fn vcomp(b: &NatTrans, a: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::VComp(b.clone(), a.clone()))
    }

    pub fn whisker_left(f: &Functor, t: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::WhiskerLeft(f.clone(), t.clone()))
    }

    pub fn whisker_right(t: &NatTrans, f: &Functor) -> NatTrans {
        NatTrans::mk(NatKind::WhiskerRight(t.clone(), f.clone()))
    }

    pub fn inverse(t: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::Inverse(t.clone()))
    }

    pub fn bang(f: &Functor) -> NatTrans {
        NatTrans::mk(NatKind::Bang(f.clone()))
    }

    pub fn unique_iso(from: &Functor, to: &Functor) -> NatTrans {
        NatTrans::mk(NatKind::UniqueIso { from: from.clone(), to: to.clone() })
    }

    pub fn open_unit(topos: &Cat, u: &Obj) -> NatTrans {
        NatTrans::mk(NatKind::OpenUnit { topos: topos.clone(), u: u.clone() })
    }

    pub fn open_counit(topos: &Cat, u: &Obj) -> NatTrans {
        NatTrans::mk(NatKind::OpenCounit { topos: topos.clone(), u: u.clone() })
    }

    pub fn closed_unit(topos: &Cat, u: &Obj) -> NatTrans {
        NatTrans::mk(NatKind::ClosedUnit { topos: topos.clone(), u: u.clone() })
    }

    pub fn closed_counit(topos: &Cat, u: &Obj) -> NatTrans {
        NatTrans::mk(NatKind::ClosedCounit { topos: topos.clone(), u: u.clone() })
    }

    pub fn gl_theta(gl: &Cat) -> NatTrans {
        NatTrans::mk(NatKind::GlTheta(gl.clone()))
    }

    pub fn gl_epsilon(gl: &Cat) -> NatTrans {
        NatTrans::mk(NatKind::GlEpsilon(gl.clone()))
    }

    pub fn gl_zeta(gl: &Cat) -> NatTrans {
        NatTrans::mk(NatKind::GlZeta(gl.clone()))
    }

    pub fn gl_delta(gl: &Cat) -> NatTrans {
        NatTrans::mk(NatKind::GlDelta(gl.clone()))
    }

    pub fn phi_alpha(ext: &Rc<Extension>) -> NatTrans {
        NatTrans::mk(NatKind::PhiAlpha(ext.clone()))
    }

    pub fn phi_gamma(ext: &Rc<Extension>) -> NatTrans {
        NatTrans::mk(NatKind::PhiGamma(ext.clone()))
    }

    pub fn phi_unit(ext: &Rc<Extension>) -> NatTrans {
        NatTrans::mk(NatKind::PhiUnit(ext.clone()))
    }

    pub fn phi_counit(ext: &Rc<Extension>) -> NatTrans {
        NatTrans::mk(NatKind::PhiCounit(ext.clone()))
    }

    pub fn gamma_alpha(psi: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::GammaAlpha(psi.clone()))
    }

    pub fn gamma_gamma(psi: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::GammaGamma(psi.clone()))
    }

    pub fn psi_star_unit(psi: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::PsiStarUnit(psi.clone()))
    }

    pub fn psi_star_counit(psi: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::PsiStarCounit(psi.clone()))
    }

    pub fn ext_two_cell(m1: &Rc<ExtMorphism>, m2: &Rc<ExtMorphism>) -> NatTrans {
        NatTrans::mk(NatKind::ExtTwoCell { m1: m1.clone(), m2: m2.clone() })
    }

    pub fn product_proj(product: &Functor, index: usize) -> NatTrans {
        NatTrans::mk(NatKind::ProductProj { product: product.clone(), index })
    }

    pub fn product_tuple(product: &Functor, components: Vec<NatTrans>) -> NatTrans {
        NatTrans::mk(NatKind::ProductTuple { product: product.clone(), components })
    }

    pub fn equalizer_incl(eq: &Functor) -> NatTrans {
        NatTrans::mk(NatKind::EqualizerIncl { eq: eq.clone() })
    }

    pub fn equalizer_tuple(eq: &Functor, through: &NatTrans) -> NatTrans {
        NatTrans::mk(NatKind::EqualizerTuple { eq: eq.clone(), through: through.clone() })
    }

    pub fn table(t: TableNat) -> NatTrans {
        NatTrans::mk(NatKind::Table(Rc::new(t)))
    }

    pub fn source(&self) -> Functor {
        match self.kind() {
            NatKind::Identity(f) => f.clone(),
            NatKind::IdentityBetween(f, _) => f.clone(),
            NatKind::VComp(_, a) => a.source(),
            NatKind::WhiskerLeft(f, t) => {
                Functor::compose(f, &t.source()).expect("whisker boundary")
            }
            NatKind::WhiskerRight(t, f) => {
                Functor::compose(&t.source(), f).expect("whisker boundary")
            }
            NatKind::Inverse(t) => t.target(),
            NatKind::Bang(f) => f.clone(),
            NatKind::UniqueIso { from, .. } => from.clone(),
            NatKind::OpenUnit { topos, .. } => Functor::identity(topos),
            NatKind::OpenCounit { topos, u } => Functor::compose(
                &Functor::times_u(topos, u),
                &Functor::exp_u(topos, u),
            )
            .expect("open counit boundary"),
            NatKind::ClosedUnit { topos, .. } => Functor::identity(topos),
            NatKind::ClosedCounit { topos, u } => Functor::compose(
                &Functor::k_star(topos, u),
                &Functor::inclusion(&crate::functor::kernel_cat(topos, u)),
            )
            .expect("closed counit boundary"),
            NatKind::GlTheta(gl) => Functor::identity(gl),
            NatKind::GlEpsilon(gl) => {
                Functor::compose(&Functor::pi2(gl), &Functor::pi2_star(gl))
                    .expect("gl epsilon boundary")
            }
            NatKind::GlZeta(gl) => Functor::identity(gl),
            NatKind::GlDelta(gl) => {
                Functor::compose(&Functor::pi1(gl), &Functor::pi1_star(gl))
                    .expect("gl delta boundary")
            }
            NatKind::PhiAlpha(ext) => Functor::pi1_star(&ext.glueing_cat()),
            NatKind::PhiGamma(ext) => Functor::pi2_star(&ext.glueing_cat()),
            NatKind::PhiUnit(ext) => Functor::identity(&ext.g),
            NatKind::PhiCounit(ext) => Functor::compose(
                &Functor::phi(ext),
                &Functor::phi_inv(ext),
            )
            .expect("phi counit boundary"),
            NatKind::GammaAlpha(psi) => {
                Functor::pi1_star(&Cat::glueing(psi.source()))
            }
            NatKind::GammaGamma(psi) => {
                Functor::pi2_star(&Cat::glueing(psi.source()))
            }
            NatKind::PsiStarUnit(psi) => Functor::identity(&Cat::glueing(psi.source())),
            NatKind::PsiStarCounit(psi) => Functor::compose(
                &Functor::psi_star(psi),
                &Functor::gamma_psi(psi),
            )
            .expect("psi star counit boundary"),
            NatKind::ExtTwoCell { m1, .. } => m1.psi.clone(),
            NatKind::ProductProj { product, .. } => product.clone(),
            NatKind::ProductTuple { components, .. } => components[0].source(),
            NatKind::EqualizerIncl { eq } => eq.clone(),
            NatKind::EqualizerTuple { through, .. } => through.source(),
            NatKind::Table(t) => t.source.clone(),
        }
    }

    pub fn target(&self) -> Functor {
        match self.kind() {
            NatKind::Identity(f) => f.clone(),
            NatKind::IdentityBetween(_, g) => g.clone(),
            NatKind::VComp(b, _) => b.target(),
            NatKind::WhiskerLeft(f, t) => {
                Functor::compose(f, &t.target()).expect("whisker boundary")
            }
            NatKind::WhiskerRight(t, f) => {
                Functor::compose(&t.target(), f).expect("whisker boundary")
            }
            NatKind::Inverse(t) => t.source(),
            NatKind::Bang(f) => Functor::const_terminal(&f.source(), &f.target()),
            NatKind::UniqueIso { to, .. } => to.clone(),
            NatKind::OpenUnit { topos, u } => Functor::compose(
                &Functor::exp_u(topos, u),
                &Functor::times_u(topos, u),
            )
            .expect("open unit boundary"),
            NatKind::OpenCounit { topos, u } => Functor::identity(&Cat::slice(topos, u)),
            NatKind::ClosedUnit { topos, u } => Functor::compose(
                &Functor::inclusion(&crate::functor::kernel_cat(topos, u)),
                &Functor::k_star(topos, u),
            )
            .expect("closed unit boundary"),
            NatKind::ClosedCounit { topos, u } => {
                Functor::identity(&crate::functor::kernel_cat(topos, u))
            }
            NatKind::GlTheta(gl) => {
                Functor::compose(&Functor::pi2_star(gl), &Functor::pi2(gl))
                    .expect("gl theta boundary")
            }
            NatKind::GlEpsilon(gl) => Functor::identity(&gl.gl_functor().source()),
            NatKind::GlZeta(gl) => {
                Functor::compose(&Functor::pi1_star(gl), &Functor::pi1(gl))
                    .expect("gl zeta boundary")
            }
            NatKind::GlDelta(gl) => Functor::identity(&gl.gl_functor().target()),
            NatKind::PhiAlpha(ext) => Functor::compose(
                &Functor::phi(ext),
                &ext.k,
            )
            .expect("phi alpha boundary"),
            NatKind::PhiGamma(ext) => Functor::compose(
                &Functor::phi(ext),
                &ext.e_star,
            )
            .expect("phi gamma boundary"),
            NatKind::PhiUnit(ext) => Functor::compose(
                &Functor::phi_inv(ext),
                &Functor::phi(ext),
            )
            .expect("phi unit boundary"),
            NatKind::PhiCounit(ext) => Functor::identity(&ext.glueing_cat()),
            NatKind::GammaAlpha(psi) => Functor::compose(
                &Functor::gamma_psi(psi),
                &Functor::pi1_star(&Cat::glueing(psi.target())),
            )
            .expect("gamma alpha boundary"),
            NatKind::GammaGamma(psi) => Functor::compose(
                &Functor::gamma_psi(psi),
                &Functor::pi2_star(&Cat::glueing(psi.target())),
            )
            .expect("gamma gamma boundary"),
            NatKind::PsiStarUnit(psi) => Functor::compose(
                &Functor::gamma_psi(psi),
                &Functor::psi_star(psi),
            )
            .expect("psi star unit boundary"),
            NatKind::PsiStarCounit(psi) => Functor::identity(&Cat::glueing(psi.target())),
            NatKind::ExtTwoCell { m2, .. } => m2.psi.clone(),
            NatKind::ProductProj { product, index } => match product.kind() {
                FunctorKind::PointwiseProduct(fs) => fs[*index].clone(),
                _ => panic!("projection out of a non-product"),
            },
            NatKind::ProductTuple { product, .. } => product.clone(),
            NatKind::EqualizerIncl { eq } => match eq.kind() {
                FunctorKind::PointwiseEqualizer(s1, _) => s1.source(),
                _ => panic!("inclusion of a non-equalizer"),
            },
            NatKind::EqualizerTuple { eq, .. } => eq.clone(),
            NatKind::Table(t) => t.target.clone(),
        }
    }

    /// The component at an object of the source functor's source category.
    pub fn component(&self, x: &Obj) -> Mor {
        match self.kind() {
            NatKind::Identity(f) => Mor::identity_of(&f.on_obj(x)),
            NatKind::IdentityBetween(f, g) => {
                let fx = f.on_obj(x);
                debug_assert_eq!(fx, g.on_obj(x), "identity-between needs pointwise agreement");
                Mor::identity_of(&fx)
            }
            NatKind::VComp(b, a) => comp(&b.component(x), &a.component(x)),
            NatKind::WhiskerLeft(f, t) => f.on_mor(&t.component(x)),
            NatKind::WhiskerRight(t, f) => t.component(&f.on_obj(x)),
            NatKind::Inverse(t) => t
                .component(x)
                .inverse()
                .expect("inverted transformation has isomorphism components"),
            NatKind::Bang(f) => {
                let cat = f.target();
                cat.bang(&f.on_obj(x))
            }
            NatKind::UniqueIso { from, to } => {
                let cat = from.target();
                crate::cat::unique_to_terminal_like(&cat, &from.on_obj(x), &to.on_obj(x))
            }
            NatKind::OpenUnit { topos, u } => {
                let sub = Subterminal::new(u.as_psh().clone()).expect("subterminal");
                let prod = topos.product_cone(x, u).expect("products");
                let ident = Mor::identity_of(&prod.apex);
                let m = presheaf::exp_curry(
                    x.as_psh(),
                    &sub,
                    prod.apex.as_psh(),
                    ident.as_psh(),
                )
                .expect("unit transpose");
                Mor::Psh(m)
            }
            NatKind::OpenCounit { u, .. } => {
                let sub = Subterminal::new(u.as_psh().clone()).expect("subterminal");
                Mor::Psh(presheaf::exp_eval(x.as_psh(), &sub))
            }
            NatKind::ClosedUnit { topos, u } => {
                let prod = topos.product_cone(x, u).expect("products");
                topos.pushout(&prod.p1, &prod.p2).expect("pushouts").i1
            }
            NatKind::ClosedCounit { topos, u } => {
                let kernel = crate::functor::kernel_cat(topos, u);
                let prod = topos.product_cone(x, u).expect("products");
                let sq = topos.pushout(&prod.p1, &prod.p2).expect("pushouts");
                let j = kernel.from_initial(x).expect("kernel objects receive the initial");
                topos
                    .pushout_comediate(&sq, &Mor::identity_of(x), &j)
                    .expect("counit cocone comediates")
            }
            NatKind::GlTheta(gl) => {
                let g = x.as_gl();
                let cod = Functor::pi2_star(gl).on_obj(&g.part_h);
                gl.gl_mor(g, cod.as_gl(), g.ell.clone(), Mor::identity_of(&g.part_h))
                    .expect("theta square commutes")
            }
            NatKind::GlEpsilon(_) => Mor::identity_of(x),
            NatKind::GlZeta(gl) => {
                let g = x.as_gl();
                let f = gl.gl_functor();
                let cod = Functor::pi1_star(gl).on_obj(&g.part_n);
                gl.gl_mor(
                    g,
                    cod.as_gl(),
                    Mor::identity_of(&g.part_n),
                    f.source().bang(&g.part_h),
                )
                .expect("zeta square commutes")
            }
            NatKind::GlDelta(_) => Mor::identity_of(x),
            NatKind::PhiAlpha(ext) => {
                let gl = ext.glueing_cat();
                let dom = Functor::pi1_star(&gl).on_obj(x);
                let cod = Functor::phi(ext).on_obj(&ext.k.on_obj(x));
                let f_part = ext
                    .delta
                    .component(x)
                    .inverse()
                    .expect("delta components are isomorphisms");
                let g_part = crate::cat::unique_to_terminal_like(
                    &ext.h,
                    &dom.as_gl().part_h,
                    &cod.as_gl().part_h,
                );
                gl.gl_mor(dom.as_gl(), cod.as_gl(), f_part, g_part)
                    .expect("alpha square commutes")
            }
            NatKind::PhiGamma(ext) => {
                let gl = ext.glueing_cat();
                let dom = Functor::pi2_star(&gl).on_obj(x);
                let cod = Functor::phi(ext).on_obj(&ext.e_star.on_obj(x));
                let f_part = Mor::identity_of(&dom.as_gl().part_n);
                let g_part = ext
                    .epsilon
                    .component(x)
                    .inverse()
                    .expect("epsilon components are isomorphisms");
                gl.gl_mor(dom.as_gl(), cod.as_gl(), f_part, g_part)
                    .expect("gamma square commutes")
            }
            NatKind::PhiUnit(ext) => {
                let phi_x = Functor::phi(ext).on_obj(x);
                let sq = phi_inv_square(ext, phi_x.as_gl());
                ext.g
                    .pullback_mediate(
                        &sq.square,
                        &ext.zeta.component(x),
                        &ext.theta.component(x),
                    )
                    .expect("unit cone mediates")
            }
            NatKind::PhiCounit(ext) => {
                let gl = ext.glueing_cat();
                let g = x.as_gl();
                let sq = phi_inv_square(ext, g);
                let p = sq.apex;
                let dom = Functor::phi(ext).on_obj(&p);
                let f_part = comp(&ext.delta.component(&g.part_n), &ext.k_star.on_mor(&sq.p1));
                let g_part = comp(&ext.epsilon.component(&g.part_h), &ext.e.on_mor(&sq.p2));
                gl.gl_mor(dom.as_gl(), g, f_part, g_part)
                    .expect("counit square commutes")
            }
            NatKind::GammaAlpha(psi) => {
                let gl1 = Cat::glueing(psi.target());
                let gl2 = Cat::glueing(psi.source());
                let n_cat = psi.target().target();
                let dom = Functor::pi1_star(&gl2).on_obj(x);
                let cod = Functor::gamma_psi(psi).on_obj(&Functor::pi1_star(&gl1).on_obj(x));
                let k1x = Functor::pi1_star(&gl1).on_obj(x);
                let sq = n_cat
                    .pullback(&k1x.as_gl().ell, &psi.component(&k1x.as_gl().part_h))
                    .expect("pullback");
                let f_part = n_cat
                    .pullback_mediate(&sq, &Mor::identity_of(x), &dom.as_gl().ell)
                    .expect("alpha cone mediates");
                gl2.gl_mor(
                    dom.as_gl(),
                    cod.as_gl(),
                    f_part,
                    Mor::identity_of(&dom.as_gl().part_h),
                )
                .expect("alpha square commutes")
            }
            NatKind::GammaGamma(psi) => {
                let gl1 = Cat::glueing(psi.target());
                let gl2 = Cat::glueing(psi.source());
                let n_cat = psi.target().target();
                let dom = Functor::pi2_star(&gl2).on_obj(x);
                let p2s1 = Functor::pi2_star(&gl1).on_obj(x);
                let cod = Functor::gamma_psi(psi).on_obj(&p2s1);
                let sq = n_cat
                    .pullback(&p2s1.as_gl().ell, &psi.component(x))
                    .expect("pullback");
                let f_part = n_cat
                    .pullback_mediate(
                        &sq,
                        &psi.component(x),
                        &Mor::identity_of(&dom.as_gl().part_n),
                    )
                    .expect("gamma cone mediates");
                gl2.gl_mor(dom.as_gl(), cod.as_gl(), f_part, Mor::identity_of(x))
                    .expect("gamma square commutes")
            }
            NatKind::PsiStarUnit(psi) => {
                let gl2 = Cat::glueing(psi.source());
                let n_cat = psi.target().target();
                let g = x.as_gl();
                let cod = Functor::gamma_psi(psi)
                    .on_obj(&Functor::psi_star(psi).on_obj(x));
                let shifted = comp(&psi.component(&g.part_h), &g.ell);
                let sq = n_cat
                    .pullback(&shifted, &psi.component(&g.part_h))
                    .expect("pullback");
                let f_part = n_cat
                    .pullback_mediate(&sq, &Mor::identity_of(&g.part_n), &g.ell)
                    .expect("unit cone mediates");
                gl2.gl_mor(g, cod.as_gl(), f_part, Mor::identity_of(&g.part_h))
                    .expect("unit square commutes")
            }
            NatKind::PsiStarCounit(psi) => {
                let gl1 = Cat::glueing(psi.target());
                let n_cat = psi.target().target();
                let g = x.as_gl();
                let dom = Functor::psi_star(psi)
                    .on_obj(&Functor::gamma_psi(psi).on_obj(x));
                let sq = n_cat
                    .pullback(&g.ell, &psi.component(&g.part_h))
                    .expect("pullback");
                gl1.gl_mor(dom.as_gl(), g, sq.p1, Mor::identity_of(&g.part_h))
                    .expect("counit square commutes")
            }
            NatKind::ExtTwoCell { m1, m2 } => ext_two_cell_component(m1, m2, x),
            NatKind::ProductProj { product, index } => match product.kind() {
                FunctorKind::PointwiseProduct(fs) => {
                    let cat = fs[0].target();
                    let parts: Vec<Obj> = fs.iter().map(|f| f.on_obj(x)).collect();
                    nary_product(&cat, &parts).1[*index].clone()
                }
                _ => panic!("projection out of a non-product"),
            },
            NatKind::ProductTuple { product, components } => match product.kind() {
                FunctorKind::PointwiseProduct(fs) => {
                    let cat = fs[0].target();
                    let parts: Vec<Obj> = fs.iter().map(|f| f.on_obj(x)).collect();
                    let legs: Vec<Mor> =
                        components.iter().map(|c| c.component(x)).collect();
                    nary_product_mediate(&cat, &parts, &legs)
                }
                _ => panic!("tupling into a non-product"),
            },
            NatKind::EqualizerIncl { eq } => match eq.kind() {
                FunctorKind::PointwiseEqualizer(s1, s2) => {
                    let cat = s1.source().target();
                    cat.equalizer(&s1.component(x), &s2.component(x))
                        .expect("equalizer")
                        .incl
                }
                _ => panic!("inclusion of a non-equalizer"),
            },
            NatKind::EqualizerTuple { eq, through } => match eq.kind() {
                FunctorKind::PointwiseEqualizer(s1, s2) => {
                    let cat = s1.source().target();
                    let fork = cat
                        .equalizer(&s1.component(x), &s2.component(x))
                        .expect("equalizer");
                    cat.equalizer_mediate(&fork, &through.component(x))
                        .expect("equalizing transformation mediates")
                }
                _ => panic!("tupling into a non-equalizer"),
            },
            NatKind::Table(t) => table_component(t, x),
        }
    }
}

fn table_component(t: &TableNat, x: &Obj) -> Mor {
    if let Some(m) = t.entries.get(x) {
        return m.clone();
    }
    // Transport along the canonical relabelling. Only presheaf objects are
    // supported as table keys.
    let p = x.as_psh();
    let (canon, iso) = canonicalize(p);
    let key = Obj::Psh(canon);
    let at_canon = t
        .entries
        .get(&key)
        .unwrap_or_else(|| panic!("table transformation has no entry for {key}"));
    let r = Mor::Psh(iso);
    let r_inv = r.inverse().expect("canonical relabelling is an isomorphism");
    comp(
        &t.target.on_mor(&r_inv),
        &comp(at_canon, &t.source.on_mor(&r)),
    )
}

/// tau_G mediated through the image of the representing pullback; callers
/// must have checked the compatibility criterion first.
fn ext_two_cell_component(m1: &ExtMorphism, m2: &ExtMorphism, x: &Obj) -> Mor {
    let e1 = &m1.source;
    let g2 = &m1.target.g;
    let theta_x = e1.theta.component(x);
    let zeta_x = e1.zeta.component(x);

    let aa = NatTrans::vcomp(&m2.alpha, &NatTrans::inverse(&m1.alpha));
    let gg = NatTrans::vcomp(&m2.gamma, &NatTrans::inverse(&m1.gamma));

    let leg1 = comp(
        &aa.component(&e1.k_star.on_obj(x)),
        &m1.psi.on_mor(&zeta_x),
    );
    let leg2 = comp(
        &gg.component(&e1.e.on_obj(x)),
        &m1.psi.on_mor(&theta_x),
    );

    let c1 = m2
        .psi
        .on_mor(&e1.k.on_mor(&e1.k_star.on_mor(&theta_x)));
    let c2 = m2
        .psi
        .on_mor(&e1.zeta.component(&e1.e_star.on_obj(&e1.e.on_obj(x))));
    let sq = g2.pullback(&c1, &c2).expect("representing cospan pullback");
    let mediated = g2
        .pullback_mediate(&sq, &leg1, &leg2)
        .expect("two-cell cone mediates");
    let comparison = g2
        .pullback_mediate(
            &sq,
            &m2.psi.on_mor(&zeta_x),
            &m2.psi.on_mor(&theta_x),
        )
        .expect("comparison cone mediates");
    let comparison_inv = comparison
        .inverse()
        .expect("lex image of the representing pullback is a pullback");
    comp(&comparison_inv, &mediated)
}

// ---------------------------------------------------------------------------
// Derived operations on transformations
// ---------------------------------------------------------------------------

/// Vertical composition with a boundary check.
pub fn vcompose(b: &NatTrans, a: &NatTrans) -> Result<NatTrans, CatError> {
    if a.target() != b.source() {
        return Err(CatError::BoundaryMismatch(
            "vertical composition boundary mismatch".into(),
        ));
    }
    Ok(NatTrans::vcomp(b, a))
}

pub fn whisker_left(f: &Functor, t: &NatTrans) -> Result<NatTrans, CatError> {
    if t.source().target() != f.source() {
        return Err(CatError::BoundaryMismatch("left whisker boundary mismatch".into()));
    }
    Ok(NatTrans::whisker_left(f, t))
}

pub fn whisker_right(t: &NatTrans, f: &Functor) -> Result<NatTrans, CatError> {
    if f.target() != t.source().source() {
        return Err(CatError::BoundaryMismatch("right whisker boundary mismatch".into()));
    }
    Ok(NatTrans::whisker_right(t, f))
}

/// Horizontal composition `b * a`, as the left-then-right whiskering route.
pub fn hcompose(b: &NatTrans, a: &NatTrans) -> Result<NatTrans, CatError> {
    let first = whisker_left(&b.source(), a)?;
    let second = whisker_right(b, &a.target())?;
    vcompose(&second, &first)
}

/// Horizontal composition via the other route; agrees with `hcompose` by the
/// interchange law, which the law suite checks on probes.
pub fn hcompose_other(b: &NatTrans, a: &NatTrans) -> Result<NatTrans, CatError> {
    let first = whisker_right(b, &a.source())?;
    let second = whisker_left(&b.target(), a)?;
    vcompose(&second, &first)
}

/// An adjunction `left -| right` with chosen unit and counit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjunction {
    pub left: Functor,
    pub right: Functor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

/// Which way a mate is transposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MateDirection {
    /// From `sigma : L2 Q -> P L1` to `Q R1 -> R2 P`.
    LeftToRight,
    /// From `sigma : Q R1 -> R2 P` to `L2 Q -> P L1`.
    RightToLeft,
}

/// The mate of `sigma` across `adj1` and `adj2`, for a square of functors
/// `q` (between the left-adjoint sources) and `p` (between their targets).
pub fn mate(
    adj1: &Adjunction,
    adj2: &Adjunction,
    q: &Functor,
    p: &Functor,
    sigma: &NatTrans,
    direction: MateDirection,
) -> Result<NatTrans, CatError> {
    match direction {
        MateDirection::LeftToRight => {
            // (R2 P eps1) . (R2 sigma R1) . (eta2 Q R1)
            let qr1 = Functor::compose(q, &adj1.right)?;
            let first = whisker_right(&adj2.unit, &qr1)?;
            let middle = whisker_left(&adj2.right, &whisker_right(sigma, &adj1.right)?)?;
            let last = whisker_left(
                &Functor::compose(&adj2.right, p)?,
                &adj1.counit,
            )?;
            vcompose(&last, &vcompose(&middle, &first)?)
        }
        MateDirection::RightToLeft => {
            // (eps2 P L1) . (L2 sigma L1) . (L2 Q eta1)
            let first = whisker_left(&Functor::compose(&adj2.left, q)?, &adj1.unit)?;
            let middle = whisker_left(&adj2.left, &whisker_right(sigma, &adj1.left)?)?;
            let last = whisker_right(
                &adj2.counit,
                &Functor::compose(p, &adj1.left)?,
            )?;
            vcompose(&last, &vcompose(&middle, &first)?)
        }
    }
}

/// The identity adjunction on a category; useful as one side of a mate.
pub fn identity_adjunction(cat: &Cat) -> Adjunction {
    let id = Functor::identity(cat);
    Adjunction {
        left: id.clone(),
        right: id.clone(),
        unit: NatTrans::identity(&id),
        counit: NatTrans::identity(&id),
    }
}

