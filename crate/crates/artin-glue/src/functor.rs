//! Finite-limit-preserving functors as intensional rules.
//!
//! A `Functor` is a closed descriptor: applying it to objects and morphisms
//! is pure evaluation, and two functors are comparable as data. Composition
//! chains are kept flattened with identities stripped, so composites built
//! in different association orders are equal values.

use crate::cat::{comp, Cat, CatError, GlObj, Membership, Mor, Obj};
use crate::ext::Extension;
use crate::nat::NatTrans;
use crate::presheaf::{self, Presheaf, PresheafMor, Subterminal};
use std::collections::BTreeMap;
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    Identity(Cat),
    /// Flattened composite; `chain[0]` is applied last. Never nested, never
    /// contains identities, always has length at least two.
    Compose(Vec<Functor>),
    /// The zero morphism: everything goes to the chosen terminal.
    ConstTerminal { source: Cat, target: Cat },
    /// Full-subcategory inclusion.
    Inclusion { sub: Cat },
    /// A functor whose image lies in a full subcategory of its target.
    Corestrict { inner: Functor, target: Cat },
    /// `X -> X x U` into the slice over the subterminal `u`.
    TimesU { topos: Cat, u: Obj },
    /// `S -> S^U` out of the slice over the subterminal `u`.
    ExpU { topos: Cat, u: Obj },
    /// The closed reflector: pushout of `G <- G x U -> U`, into the kernel.
    KStar { topos: Cat, u: Obj },
    /// Restriction of presheaves along a base functor.
    Reindex { map: Rc<crate::base::BaseFunctor> },
    Pi1(Cat),
    Pi2(Cat),
    /// `N -> (N, 1, !)`.
    Pi1Star(Cat),
    /// `H -> (F(H), H, id)`.
    Pi2Star(Cat),
    /// `G -> (K*(G), E(G), K*(theta_G))` into the glueing of `K*E_*`.
    Phi(Rc<Extension>),
    /// The objectwise-pullback inverse of `Phi`.
    PhiInv(Rc<Extension>),
    /// For `psi : F2 -> F1`, the functor `Gl(F1) -> Gl(F2)` pulling `ell`
    /// back along the components of `psi`.
    GammaPsi(NatTrans),
    /// For `psi : F2 -> F1`, the functor `Gl(F2) -> Gl(F1)` post-composing
    /// `ell` with the components of `psi`; left adjoint to `GammaPsi`.
    PsiStar(NatTrans),
    /// `Gl(F T) -> Gl(F)`, `(n, h, ell) -> (n, T(h), ell)`.
    GlQ { outer: Cat, t: Functor },
    /// `Gl(F) -> Gl(S F)`, `(n, h, ell) -> (S n, h, S ell)`.
    GlP { src: Cat, s: Functor },
    /// Pointwise chosen product of parallel functors.
    PointwiseProduct(Vec<Functor>),
    /// Pointwise chosen equalizer of a parallel pair of transformations.
    PointwiseEqualizer(NatTrans, NatTrans),
    /// An extensional functor given by finite tables; queries outside the
    /// tables are a caller error.
    Table(Rc<TableFunctor>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFunctor {
    pub name: String,
    pub source: Cat,
    pub target: Cat,
    pub on_obj: BTreeMap<Obj, Obj>,
    pub on_mor: BTreeMap<Mor, Mor>,
}

#[derive(Clone, Debug)]
pub struct Functor(Rc<FunctorKind>);

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Functor {}

impl Functor {
    fn mk(kind: FunctorKind) -> Functor {
        Functor(Rc::new(kind))
    }

    pub fn kind(&self) -> &FunctorKind {
        &self.0
    }

    pub fn identity(cat: &Cat) -> Functor {
        Functor::mk(FunctorKind::Identity(cat.clone()))
    }

    pub fn const_terminal(source: &Cat, target: &Cat) -> Functor {
        Functor::mk(FunctorKind::ConstTerminal { source: source.clone(), target: target.clone() })
    }

    pub fn inclusion(sub: &Cat) -> Functor {
        Functor::mk(FunctorKind::Inclusion { sub: sub.clone() })
    }

    pub fn corestrict(inner: &Functor, target: &Cat) -> Functor {
        assert_eq!(target.parent(), &inner.target(), "corestriction target parent");
        Functor::mk(FunctorKind::Corestrict { inner: inner.clone(), target: target.clone() })
    }

    pub fn times_u(topos: &Cat, u: &Obj) -> Functor {
        Functor::mk(FunctorKind::TimesU { topos: topos.clone(), u: u.clone() })
    }

    pub fn exp_u(topos: &Cat, u: &Obj) -> Functor {
        Functor::mk(FunctorKind::ExpU { topos: topos.clone(), u: u.clone() })
    }

    pub fn k_star(topos: &Cat, u: &Obj) -> Functor {
        Functor::mk(FunctorKind::KStar { topos: topos.clone(), u: u.clone() })
    }

    pub fn reindex(map: Rc<crate::base::BaseFunctor>) -> Functor {
        Functor::mk(FunctorKind::Reindex { map })
    }

    pub fn pi1(gl: &Cat) -> Functor {
        Functor::mk(FunctorKind::Pi1(gl.clone()))
    }

    pub fn pi2(gl: &Cat) -> Functor {
        Functor::mk(FunctorKind::Pi2(gl.clone()))
    }

    pub fn pi1_star(gl: &Cat) -> Functor {
        Functor::mk(FunctorKind::Pi1Star(gl.clone()))
    }

    pub fn pi2_star(gl: &Cat) -> Functor {
        Functor::mk(FunctorKind::Pi2Star(gl.clone()))
    }

    pub fn phi(ext: &Rc<Extension>) -> Functor {
        Functor::mk(FunctorKind::Phi(ext.clone()))
    }

    pub fn phi_inv(ext: &Rc<Extension>) -> Functor {
        Functor::mk(FunctorKind::PhiInv(ext.clone()))
    }

    pub fn gamma_psi(psi: &NatTrans) -> Functor {
        Functor::mk(FunctorKind::GammaPsi(psi.clone()))
    }

    pub fn psi_star(psi: &NatTrans) -> Functor {
        Functor::mk(FunctorKind::PsiStar(psi.clone()))
    }

    pub fn gl_q(outer: &Cat, t: &Functor) -> Functor {
        Functor::mk(FunctorKind::GlQ { outer: outer.clone(), t: t.clone() })
    }

    pub fn gl_p(src: &Cat, s: &Functor) -> Functor {
        Functor::mk(FunctorKind::GlP { src: src.clone(), s: s.clone() })
    }

    pub fn pointwise_product(factors: Vec<Functor>) -> Functor {
        assert!(factors.len() >= 2, "pointwise products take at least two factors");
        Functor::mk(FunctorKind::PointwiseProduct(factors))
    }

    pub fn pointwise_equalizer(s1: &NatTrans, s2: &NatTrans) -> Functor {
        Functor::mk(FunctorKind::PointwiseEqualizer(s1.clone(), s2.clone()))
    }

    pub fn table(t: TableFunctor) -> Functor {
        Functor::mk(FunctorKind::Table(Rc::new(t)))
    }

    /// `g . f`, flattened so that association order does not matter.
    pub fn compose(g: &Functor, f: &Functor) -> Result<Functor, CatError> {
        if f.target() != g.source() {
            return Err(CatError::BoundaryMismatch(
                "functor composition boundary mismatch".into(),
            ));
        }
        fn flatten(f: &Functor, out: &mut Vec<Functor>) {
            match f.kind() {
                FunctorKind::Identity(_) => {}
                FunctorKind::Compose(chain) => out.extend(chain.iter().cloned()),
                _ => out.push(f.clone()),
            }
        }
        let mut chain = Vec::new();
        flatten(g, &mut chain);
        flatten(f, &mut chain);
        Ok(match chain.len() {
            0 => Functor::identity(&f.source()),
            1 => chain.into_iter().next().unwrap(),
            _ => Functor::mk(FunctorKind::Compose(chain)),
        })
    }

    pub fn source(&self) -> Cat {
        match self.kind() {
            FunctorKind::Identity(c) => c.clone(),
            FunctorKind::Compose(chain) => chain.last().unwrap().source(),
            FunctorKind::ConstTerminal { source, .. } => source.clone(),
            FunctorKind::Inclusion { sub } => sub.clone(),
            FunctorKind::Corestrict { inner, .. } => inner.source(),
            FunctorKind::TimesU { topos, .. } => topos.clone(),
            FunctorKind::ExpU { topos, u } => Cat::slice(topos, u),
            FunctorKind::KStar { topos, .. } => topos.clone(),
            FunctorKind::Reindex { map } => Cat::psh(map.dst.clone()),
            FunctorKind::Pi1(gl)
            | FunctorKind::Pi2(gl) => gl.clone(),
            FunctorKind::Pi1Star(gl) => gl.gl_functor().target(),
            FunctorKind::Pi2Star(gl) => gl.gl_functor().source(),
            FunctorKind::Phi(ext) => ext.g.clone(),
            FunctorKind::PhiInv(ext) => ext.glueing_cat(),
            FunctorKind::GammaPsi(psi) => Cat::glueing(psi.target()),
            FunctorKind::PsiStar(psi) => Cat::glueing(psi.source()),
            FunctorKind::GlQ { outer, t } => {
                Cat::glueing(Functor::compose(outer.gl_functor(), t).expect("GlQ boundary"))
            }
            FunctorKind::GlP { src, .. } => src.clone(),
            FunctorKind::PointwiseProduct(fs) => fs[0].source(),
            FunctorKind::PointwiseEqualizer(s1, _) => s1.source().source(),
            FunctorKind::Table(t) => t.source.clone(),
        }
    }

    pub fn target(&self) -> Cat {
        match self.kind() {
            FunctorKind::Identity(c) => c.clone(),
            FunctorKind::Compose(chain) => chain.first().unwrap().target(),
            FunctorKind::ConstTerminal { target, .. } => target.clone(),
            FunctorKind::Inclusion { sub } => sub.parent().clone(),
            FunctorKind::Corestrict { target, .. } => target.clone(),
            FunctorKind::TimesU { topos, u } => Cat::slice(topos, u),
            FunctorKind::ExpU { topos, .. } => topos.clone(),
            FunctorKind::KStar { topos, u } => kernel_cat(topos, u),
            FunctorKind::Reindex { map } => Cat::psh(map.src.clone()),
            FunctorKind::Pi1(gl) => gl.gl_functor().target(),
            FunctorKind::Pi2(gl) => gl.gl_functor().source(),
            FunctorKind::Pi1Star(gl) | FunctorKind::Pi2Star(gl) => gl.clone(),
            FunctorKind::Phi(ext) => ext.glueing_cat(),
            FunctorKind::PhiInv(ext) => ext.g.clone(),
            FunctorKind::GammaPsi(psi) => Cat::glueing(psi.source()),
            FunctorKind::PsiStar(psi) => Cat::glueing(psi.target()),
            FunctorKind::GlQ { outer, .. } => outer.clone(),
            FunctorKind::GlP { src, s } => {
                Cat::glueing(Functor::compose(s, src.gl_functor()).expect("GlP boundary"))
            }
            FunctorKind::PointwiseProduct(fs) => fs[0].target(),
            FunctorKind::PointwiseEqualizer(s1, _) => s1.source().target(),
            FunctorKind::Table(t) => t.target.clone(),
        }
    }

    pub fn on_obj(&self, x: &Obj) -> Obj {
        match self.kind() {
            FunctorKind::Identity(_) => x.clone(),
            FunctorKind::Compose(chain) => {
                chain.iter().rev().fold(x.clone(), |acc, f| f.on_obj(&acc))
            }
            FunctorKind::ConstTerminal { target, .. } => target.terminal(),
            FunctorKind::Inclusion { .. } | FunctorKind::Corestrict { .. } => match self.kind() {
                FunctorKind::Inclusion { .. } => x.clone(),
                FunctorKind::Corestrict { inner, .. } => inner.on_obj(x),
                _ => unreachable!(),
            },
            FunctorKind::TimesU { topos, u } => {
                topos.product_cone(x, u).expect("chosen products exist").apex
            }
            FunctorKind::ExpU { u, .. } => {
                let sub = Subterminal::new(u.as_psh().clone()).expect("u is subterminal");
                Obj::Psh(presheaf::exp_by_subterminal(x.as_psh(), &sub))
            }
            FunctorKind::KStar { topos, u } => {
                let prod = topos.product_cone(x, u).expect("chosen products exist");
                topos.pushout(&prod.p1, &prod.p2).expect("toposes have pushouts").apex
            }
            FunctorKind::Reindex { map } => {
                let p = x.as_psh();
                let at = (0..map.src.object_count())
                    .map(|c| p.at(map.obj_map[c]).clone())
                    .collect();
                let restrict = (0..map.src.arrows().len())
                    .map(|a| p.restriction(map.arrow_map[a]).clone())
                    .collect();
                Obj::Psh(
                    Presheaf::new(map.src.clone(), at, restrict)
                        .expect("reindexed presheaf is functorial"),
                )
            }
            FunctorKind::Pi1(_) => x.as_gl().part_n.clone(),
            FunctorKind::Pi2(_) => x.as_gl().part_h.clone(),
            FunctorKind::Pi1Star(gl) => {
                let f = gl.gl_functor();
                let h1 = f.source().terminal();
                let ell = crate::cat::unique_to_terminal_like(&f.target(), x, &f.on_obj(&h1));
                Obj::gl(GlObj { part_n: x.clone(), part_h: h1, ell })
            }
            FunctorKind::Pi2Star(gl) => {
                let f = gl.gl_functor();
                let fx = f.on_obj(x);
                Obj::gl(GlObj {
                    part_n: fx.clone(),
                    part_h: x.clone(),
                    ell: Mor::identity_of(&fx),
                })
            }
            FunctorKind::Phi(ext) => Obj::gl(GlObj {
                part_n: ext.k_star.on_obj(x),
                part_h: ext.e.on_obj(x),
                ell: ext.k_star.on_mor(&ext.theta.component(x)),
            }),
            FunctorKind::PhiInv(ext) => phi_inv_square(ext, x.as_gl()).apex,
            FunctorKind::GammaPsi(psi) => {
                let g = x.as_gl();
                let n_cat = psi.target().target();
                let sq = n_cat
                    .pullback(&g.ell, &psi.component(&g.part_h))
                    .expect("pullback along a component");
                Obj::gl(GlObj { part_n: sq.apex, part_h: g.part_h.clone(), ell: sq.p2 })
            }
            FunctorKind::PsiStar(psi) => {
                let g = x.as_gl();
                Obj::gl(GlObj {
                    part_n: g.part_n.clone(),
                    part_h: g.part_h.clone(),
                    ell: comp(&psi.component(&g.part_h), &g.ell),
                })
            }
            FunctorKind::GlQ { t, .. } => {
                let g = x.as_gl();
                Obj::gl(GlObj {
                    part_n: g.part_n.clone(),
                    part_h: t.on_obj(&g.part_h),
                    ell: g.ell.clone(),
                })
            }
            FunctorKind::GlP { s, .. } => {
                let g = x.as_gl();
                Obj::gl(GlObj {
                    part_n: s.on_obj(&g.part_n),
                    part_h: g.part_h.clone(),
                    ell: s.on_mor(&g.ell),
                })
            }
            FunctorKind::PointwiseProduct(fs) => {
                let cat = fs[0].target();
                let parts: Vec<Obj> = fs.iter().map(|f| f.on_obj(x)).collect();
                nary_product(&cat, &parts).0
            }
            FunctorKind::PointwiseEqualizer(s1, s2) => {
                let cat = s1.source().target();
                cat.equalizer(&s1.component(x), &s2.component(x))
                    .expect("componentwise equalizer")
                    .apex
            }
            FunctorKind::Table(t) => t
                .on_obj
                .get(x)
                .unwrap_or_else(|| panic!("table functor {} has no entry for {x}", t.name))
                .clone(),
        }
    }

    pub fn on_mor(&self, m: &Mor) -> Mor {
        match self.kind() {
            FunctorKind::Identity(_) => m.clone(),
            FunctorKind::Compose(chain) => {
                chain.iter().rev().fold(m.clone(), |acc, f| f.on_mor(&acc))
            }
            FunctorKind::ConstTerminal { target, .. } => {
                Mor::identity_of(&target.terminal())
            }
            FunctorKind::Inclusion { .. } => m.clone(),
            FunctorKind::Corestrict { inner, .. } => inner.on_mor(m),
            FunctorKind::TimesU { topos, u } => {
                let src = topos.product_cone(&m.dom(), u).expect("products");
                let dst = topos.product_cone(&m.cod(), u).expect("products");
                topos
                    .product_mediate(&dst, &comp(m, &src.p1), &src.p2)
                    .expect("product map mediates")
            }
            FunctorKind::ExpU { u, .. } => {
                let sub = Subterminal::new(u.as_psh().clone()).expect("u is subterminal");
                Mor::Psh(presheaf::exp_map(&sub, m.as_psh()))
            }
            FunctorKind::KStar { topos, u } => {
                let src_prod = topos.product_cone(&m.dom(), u).expect("products");
                let src_sq = topos.pushout(&src_prod.p1, &src_prod.p2).expect("pushouts");
                let dst_prod = topos.product_cone(&m.cod(), u).expect("products");
                let dst_sq = topos.pushout(&dst_prod.p1, &dst_prod.p2).expect("pushouts");
                topos
                    .pushout_comediate(&src_sq, &comp(&dst_sq.i1, m), &dst_sq.i2)
                    .expect("reflected map comediates")
            }
            FunctorKind::Reindex { map } => {
                let pm = m.as_psh();
                let dom = self.on_obj(&m.dom()).as_psh().clone();
                let cod = self.on_obj(&m.cod()).as_psh().clone();
                let comps = (0..map.src.object_count())
                    .map(|c| pm.component(map.obj_map[c]).clone())
                    .collect();
                Mor::Psh(PresheafMor::new(dom, cod, comps).expect("reindexed map is natural"))
            }
            FunctorKind::Pi1(_) => m.as_gl().f.clone(),
            FunctorKind::Pi2(_) => m.as_gl().g.clone(),
            FunctorKind::Pi1Star(gl) => {
                let f = gl.gl_functor();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                let h1 = f.source().terminal();
                gl.gl_mor(dom.as_gl(), cod.as_gl(), m.clone(), f.source().identity(&h1))
                    .expect("pi1* square commutes")
            }
            FunctorKind::Pi2Star(gl) => {
                let f = gl.gl_functor();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                gl.gl_mor(dom.as_gl(), cod.as_gl(), f.on_mor(m), m.clone())
                    .expect("pi2* square commutes")
            }
            FunctorKind::Phi(ext) => {
                let gl = ext.glueing_cat();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                gl.gl_mor(
                    dom.as_gl(),
                    cod.as_gl(),
                    ext.k_star.on_mor(m),
                    ext.e.on_mor(m),
                )
                .expect("Phi square commutes")
            }
            FunctorKind::PhiInv(ext) => {
                let gm = m.as_gl();
                let src = phi_inv_square(ext, &gm.dom);
                let dst = phi_inv_square(ext, &gm.cod);
                let leg1 = comp(&ext.k.on_mor(&gm.f), &src.p1);
                let leg2 = comp(&ext.e_star.on_mor(&gm.g), &src.p2);
                ext.g
                    .pullback_mediate(&dst.square, &leg1, &leg2)
                    .expect("PhiInv cone mediates")
            }
            FunctorKind::GammaPsi(psi) => {
                let gm = m.as_gl();
                let n_cat = psi.target().target();
                let f2 = psi.source();
                let src_sq = n_cat
                    .pullback(&gm.dom.ell, &psi.component(&gm.dom.part_h))
                    .expect("pullback");
                let dst_sq = n_cat
                    .pullback(&gm.cod.ell, &psi.component(&gm.cod.part_h))
                    .expect("pullback");
                let f_part = n_cat
                    .pullback_mediate(
                        &dst_sq,
                        &comp(&gm.f, &src_sq.p1),
                        &comp(&f2.on_mor(&gm.g), &src_sq.p2),
                    )
                    .expect("pulled-back map mediates");
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                Cat::glueing(f2)
                    .gl_mor(dom.as_gl(), cod.as_gl(), f_part, gm.g.clone())
                    .expect("GammaPsi square commutes")
            }
            FunctorKind::PsiStar(psi) => {
                let gm = m.as_gl();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                Cat::glueing(psi.target())
                    .gl_mor(dom.as_gl(), cod.as_gl(), gm.f.clone(), gm.g.clone())
                    .expect("PsiStar square commutes by naturality")
            }
            FunctorKind::GlQ { outer, t } => {
                let gm = m.as_gl();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                outer
                    .gl_mor(dom.as_gl(), cod.as_gl(), gm.f.clone(), t.on_mor(&gm.g))
                    .expect("GlQ square commutes")
            }
            FunctorKind::GlP { s, .. } => {
                let gm = m.as_gl();
                let dom = self.on_obj(&m.dom());
                let cod = self.on_obj(&m.cod());
                self.target()
                    .gl_mor(dom.as_gl(), cod.as_gl(), s.on_mor(&gm.f), gm.g.clone())
                    .expect("GlP square commutes")
            }
            FunctorKind::PointwiseProduct(fs) => {
                let cat = fs[0].target();
                let src_parts: Vec<Obj> = fs.iter().map(|f| f.on_obj(&m.dom())).collect();
                let dst_parts: Vec<Obj> = fs.iter().map(|f| f.on_obj(&m.cod())).collect();
                let (_, src_projs) = nary_product(&cat, &src_parts);
                let legs: Vec<Mor> = fs
                    .iter()
                    .zip(src_projs.iter())
                    .map(|(f, p)| comp(&f.on_mor(m), p))
                    .collect();
                nary_product_mediate(&cat, &dst_parts, &legs)
            }
            FunctorKind::PointwiseEqualizer(s1, s2) => {
                let cat = s1.source().target();
                let f = s1.source();
                let src = cat
                    .equalizer(&s1.component(&m.dom()), &s2.component(&m.dom()))
                    .expect("equalizer");
                let dst = cat
                    .equalizer(&s1.component(&m.cod()), &s2.component(&m.cod()))
                    .expect("equalizer");
                cat.equalizer_mediate(&dst, &comp(&f.on_mor(m), &src.incl))
                    .expect("equalized map mediates")
            }
            FunctorKind::Table(t) => t
                .on_mor
                .get(m)
                .unwrap_or_else(|| panic!("table functor {} has no entry for a morphism", t.name))
                .clone(),
        }
    }
}

/// The kernel of the open reflector at `u`: objects sent terminal-like into
/// the slice by `X -> X x U`.
pub fn kernel_cat(topos: &Cat, u: &Obj) -> Cat {
    Cat::full(
        topos.clone(),
        Membership::SentToTerminal(Functor::times_u(topos, u)),
    )
}

/// The pullback square computed by `PhiInv` at a glueing object.
pub struct PhiInvSquare {
    pub square: crate::cat::PullbackSquare,
    pub apex: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

pub fn phi_inv_square(ext: &Extension, x: &GlObj) -> PhiInvSquare {
    let k_ell = ext.k.on_mor(&x.ell);
    let zeta_at = ext.zeta.component(&ext.e_star.on_obj(&x.part_h));
    let square = ext
        .g
        .pullback(&k_ell, &zeta_at)
        .expect("PhiInv pullback exists");
    PhiInvSquare {
        apex: square.apex.clone(),
        p1: square.p1.clone(),
        p2: square.p2.clone(),
        square,
    }
}

/// Iterated chosen binary product, right associated; returns the apex and
/// one projection per part.
pub fn nary_product(cat: &Cat, parts: &[Obj]) -> (Obj, Vec<Mor>) {
    match parts {
        [] => panic!("empty product"),
        [o] => (o.clone(), vec![Mor::identity_of(o)]),
        [o, rest @ ..] => {
            let (rest_apex, rest_projs) = nary_product(cat, rest);
            let cone = cat.product_cone(o, &rest_apex).expect("products");
            let mut projs = vec![cone.p1.clone()];
            for p in rest_projs {
                projs.push(comp(&p, &cone.p2));
            }
            (cone.apex, projs)
        }
    }
}

/// Mediates legs into the iterated product of `parts`.
pub fn nary_product_mediate(cat: &Cat, parts: &[Obj], legs: &[Mor]) -> Mor {
    match parts {
        [] => panic!("empty product"),
        [_] => legs[0].clone(),
        [o, rest @ ..] => {
            let (rest_apex, _) = nary_product(cat, rest);
            let m_rest = nary_product_mediate(cat, rest, &legs[1..]);
            let cone = cat.product_cone(o, &rest_apex).expect("products");
            cat.product_mediate(&cone, &legs[0], &m_rest)
                .expect("product legs mediate")
        }
    }
}
