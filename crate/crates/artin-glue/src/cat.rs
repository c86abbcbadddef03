//! The intensional category layer.
//!
//! Objects and morphisms are closed value types (`Obj`, `Mor`) covering the
//! concrete categories this crate builds: presheaf toposes, full
//! subcategories, binary products, and glueings along a functor. A `Cat`
//! handle fixes the chosen terminal, pullbacks and other (co)limits, so that
//! composite constructions are reproducible value-for-value.

use crate::base::BaseCat;
use crate::functor::Functor;
use crate::presheaf::{
    self, psh_compose, psh_coproduct, psh_equalizer, psh_hom, psh_pullback, psh_pushout,
    Presheaf, PresheafMor, Subterminal,
};
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the membership predicate is not closed under finite limits: {0}")]
    NotLimitClosed(String),
    #[error("legs do not form a cone: {0}")]
    NonCone(String),
    #[error("legs do not form a cocone: {0}")]
    NonCocone(String),
    #[error("operation not supported by this category: {0}")]
    Unsupported(String),
    #[error("object does not belong to this category: {0}")]
    NotAnObject(String),
}

// ---------------------------------------------------------------------------
// Objects and morphisms
// ---------------------------------------------------------------------------

/// An object of one of the concrete categories.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obj {
    Psh(Presheaf),
    Pair(Box<(Obj, Obj)>),
    Gl(Box<GlObj>),
}

/// A morphism between objects, carrying its own boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mor {
    Psh(PresheafMor),
    Pair(Box<(Mor, Mor)>),
    Gl(Box<GlMor>),
}

/// A triple `(n, h, ell : n -> F(h))`; `ell`'s codomain is the chosen value
/// `F(h)` exactly, which keeps morphism validity decidable by table equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlObj {
    pub part_n: Obj,
    pub part_h: Obj,
    pub ell: Mor,
}

/// A pair `(f, g)` whose square against the two `ell` maps commutes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlMor {
    pub dom: GlObj,
    pub cod: GlObj,
    pub f: Mor,
    pub g: Mor,
}

impl Obj {
    pub fn pair(a: Obj, b: Obj) -> Obj {
        Obj::Pair(Box::new((a, b)))
    }

    pub fn gl(g: GlObj) -> Obj {
        Obj::Gl(Box::new(g))
    }

    pub fn as_psh(&self) -> &Presheaf {
        match self {
            Obj::Psh(p) => p,
            _ => panic!("expected a presheaf object"),
        }
    }

    pub fn as_gl(&self) -> &GlObj {
        match self {
            Obj::Gl(g) => g,
            _ => panic!("expected a glueing object"),
        }
    }

    pub fn as_pair(&self) -> (&Obj, &Obj) {
        match self {
            Obj::Pair(p) => (&p.0, &p.1),
            _ => panic!("expected a pair object"),
        }
    }

    /// Total element count, summed over all components recursively.
    pub fn size(&self) -> usize {
        match self {
            Obj::Psh(p) => p.size(),
            Obj::Pair(p) => p.0.size() + p.1.size(),
            Obj::Gl(g) => g.part_n.size() + g.part_h.size(),
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Psh(p) => {
                let sizes: Vec<String> =
                    p.components().iter().map(|s| s.len().to_string()).collect();
                write!(f, "psh[{}]", sizes.join(","))
            }
            Obj::Pair(p) => write!(f, "({}, {})", p.0, p.1),
            Obj::Gl(g) => write!(f, "gl({}, {})", g.part_n, g.part_h),
        }
    }
}

impl Mor {
    pub fn pair(a: Mor, b: Mor) -> Mor {
        Mor::Pair(Box::new((a, b)))
    }

    pub fn gl(g: GlMor) -> Mor {
        Mor::Gl(Box::new(g))
    }

    pub fn as_psh(&self) -> &PresheafMor {
        match self {
            Mor::Psh(m) => m,
            _ => panic!("expected a presheaf morphism"),
        }
    }

    pub fn as_gl(&self) -> &GlMor {
        match self {
            Mor::Gl(m) => m,
            _ => panic!("expected a glueing morphism"),
        }
    }

    pub fn as_pair(&self) -> (&Mor, &Mor) {
        match self {
            Mor::Pair(p) => (&p.0, &p.1),
            _ => panic!("expected a pair morphism"),
        }
    }

    pub fn dom(&self) -> Obj {
        match self {
            Mor::Psh(m) => Obj::Psh(m.dom().clone()),
            Mor::Pair(p) => Obj::pair(p.0.dom(), p.1.dom()),
            Mor::Gl(m) => Obj::gl(m.dom.clone()),
        }
    }

    pub fn cod(&self) -> Obj {
        match self {
            Mor::Psh(m) => Obj::Psh(m.cod().clone()),
            Mor::Pair(p) => Obj::pair(p.0.cod(), p.1.cod()),
            Mor::Gl(m) => Obj::gl(m.cod.clone()),
        }
    }

    pub fn is_iso(&self) -> bool {
        match self {
            Mor::Psh(m) => m.is_iso(),
            Mor::Pair(p) => p.0.is_iso() && p.1.is_iso(),
            Mor::Gl(m) => m.f.is_iso() && m.g.is_iso(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Mor::Psh(m) => m.is_identity(),
            Mor::Pair(p) => p.0.is_identity() && p.1.is_identity(),
            Mor::Gl(m) => m.f.is_identity() && m.g.is_identity(),
        }
    }

    pub fn inverse(&self) -> Option<Mor> {
        match self {
            Mor::Psh(m) => m.inverse().map(Mor::Psh),
            Mor::Pair(p) => Some(Mor::pair(p.0.inverse()?, p.1.inverse()?)),
            Mor::Gl(m) => Some(Mor::gl(GlMor {
                dom: m.cod.clone(),
                cod: m.dom.clone(),
                f: m.f.inverse()?,
                g: m.g.inverse()?,
            })),
        }
    }

    pub fn identity_of(o: &Obj) -> Mor {
        match o {
            Obj::Psh(p) => Mor::Psh(PresheafMor::identity(p)),
            Obj::Pair(p) => Mor::pair(Mor::identity_of(&p.0), Mor::identity_of(&p.1)),
            Obj::Gl(g) => Mor::gl(GlMor {
                dom: (**g).clone(),
                cod: (**g).clone(),
                f: Mor::identity_of(&g.part_n),
                g: Mor::identity_of(&g.part_h),
            }),
        }
    }

    /// Composition `g . f`; structural, no category handle needed.
    pub fn compose(g: &Mor, f: &Mor) -> Result<Mor, CatError> {
        if f.cod() != g.dom() {
            return Err(CatError::BoundaryMismatch(
                "codomain of the first map is not the domain of the second".into(),
            ));
        }
        Ok(match (g, f) {
            (Mor::Psh(g), Mor::Psh(f)) => Mor::Psh(
                psh_compose(g, f).expect("boundary already checked"),
            ),
            (Mor::Pair(g), Mor::Pair(f)) => Mor::pair(
                Mor::compose(&g.0, &f.0)?,
                Mor::compose(&g.1, &f.1)?,
            ),
            (Mor::Gl(g), Mor::Gl(f)) => Mor::gl(GlMor {
                dom: f.dom.clone(),
                cod: g.cod.clone(),
                f: Mor::compose(&g.f, &f.f)?,
                g: Mor::compose(&g.g, &f.g)?,
            }),
            _ => unreachable!("boundary check rules out mixed shapes"),
        })
    }
}

/// `g . f`, panicking on boundary errors; for internal call sites where the
/// boundary is known by construction.
pub fn comp(g: &Mor, f: &Mor) -> Mor {
    Mor::compose(g, f).expect("composable by construction")
}

// ---------------------------------------------------------------------------
// Membership predicates for full subcategories
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    All,
    /// Objects isomorphic to the parent's chosen terminal.
    TerminalLike,
    /// Objects admitting a (necessarily unique) map into a subterminal.
    AdmitsMapTo(Obj),
    /// Objects sent by the functor to a terminal-like object of its target.
    SentToTerminal(Functor),
    /// Objects whose total element count is bounded; scenario plumbing.
    SizeAtMost(usize),
}

// ---------------------------------------------------------------------------
// Categories
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatKind {
    /// Presheaves of finite sets on a finite base.
    Psh(Rc<BaseCat>),
    /// A full subcategory of `parent` cut out by `membership`.
    Full { parent: Cat, membership: Membership },
    /// The binary product category.
    Product(Cat, Cat),
    /// The glueing along a finite-limit-preserving functor `F : H -> N`:
    /// objects are triples `(n, h, ell : n -> F(h))`.
    Gl(Functor),
}

/// A category handle; cheap to clone, compared structurally.
#[derive(Clone, Debug)]
pub struct Cat(Rc<CatKind>);

impl PartialEq for Cat {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Cat {}

impl fmt::Display for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            CatKind::Psh(b) => write!(f, "Psh({})", b.name),
            CatKind::Full { parent, membership } => match membership {
                Membership::All => write!(f, "{parent}"),
                Membership::TerminalLike => write!(f, "{parent}|terminal"),
                Membership::AdmitsMapTo(_) => write!(f, "{parent}/U"),
                Membership::SentToTerminal(_) => write!(f, "Ker<{parent}>"),
                Membership::SizeAtMost(n) => write!(f, "{parent}|size<={n}"),
            },
            CatKind::Product(a, b) => write!(f, "{a}x{b}"),
            CatKind::Gl(_) => write!(f, "Gl(...)"),
        }
    }
}

impl Cat {
    pub fn kind(&self) -> &CatKind {
        &self.0
    }

    pub fn psh(base: Rc<BaseCat>) -> Cat {
        Cat(Rc::new(CatKind::Psh(base)))
    }

    pub fn product(a: Cat, b: Cat) -> Cat {
        Cat(Rc::new(CatKind::Product(a, b)))
    }

    /// Unchecked full subcategory; `full_subcategory` is the validating form.
    pub fn full(parent: Cat, membership: Membership) -> Cat {
        Cat(Rc::new(CatKind::Full { parent, membership }))
    }

    /// The glueing category along `f`; `f` is assumed lex (validated by
    /// `glue::construct`).
    pub fn glueing(f: Functor) -> Cat {
        Cat(Rc::new(CatKind::Gl(f)))
    }

    /// The slice over a subterminal, as the full subcategory of objects
    /// admitting a map into it.
    pub fn slice(topos: &Cat, u: &Obj) -> Cat {
        Cat::full(topos.clone(), Membership::AdmitsMapTo(u.clone()))
    }

    pub fn gl_functor(&self) -> &Functor {
        match &*self.0 {
            CatKind::Gl(f) => f,
            _ => panic!("not a glueing category"),
        }
    }

    pub fn parent(&self) -> &Cat {
        match &*self.0 {
            CatKind::Full { parent, .. } => parent,
            _ => panic!("not a full subcategory"),
        }
    }

    pub fn membership(&self) -> &Membership {
        match &*self.0 {
            CatKind::Full { membership, .. } => membership,
            _ => panic!("not a full subcategory"),
        }
    }

    pub fn base(&self) -> &Rc<BaseCat> {
        match &*self.0 {
            CatKind::Psh(b) => b,
            CatKind::Full { parent, .. } => parent.base(),
            _ => panic!("not a presheaf-backed category"),
        }
    }

    // -- membership and object validity ------------------------------------

    pub fn contains(&self, o: &Obj) -> bool {
        match &*self.0 {
            CatKind::Psh(b) => matches!(o, Obj::Psh(p) if p.base() == b),
            CatKind::Full { parent, membership } => {
                parent.contains(o) && self.member(membership, parent, o)
            }
            CatKind::Product(a, b) => match o {
                Obj::Pair(p) => a.contains(&p.0) && b.contains(&p.1),
                _ => false,
            },
            CatKind::Gl(f) => match o {
                Obj::Gl(g) => {
                    f.target().contains(&g.part_n)
                        && f.source().contains(&g.part_h)
                        && g.ell.dom() == g.part_n
                        && g.ell.cod() == f.on_obj(&g.part_h)
                }
                _ => false,
            },
        }
    }

    fn member(&self, membership: &Membership, parent: &Cat, o: &Obj) -> bool {
        match membership {
            Membership::All => true,
            Membership::TerminalLike => parent.is_terminal_like(o),
            Membership::AdmitsMapTo(u) => !parent.hom(o, u).is_empty(),
            Membership::SentToTerminal(f) => f.target().is_terminal_like(&f.on_obj(o)),
            Membership::SizeAtMost(n) => o.size() <= *n,
        }
    }

    // -- identities, composition, hom-sets ----------------------------------

    pub fn identity(&self, o: &Obj) -> Mor {
        Mor::identity_of(o)
    }

    pub fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor, CatError> {
        Mor::compose(g, f)
    }

    /// Every morphism `a -> b`, exactly once, in a fixed order.
    pub fn hom(&self, a: &Obj, b: &Obj) -> Vec<Mor> {
        match &*self.0 {
            CatKind::Psh(_) => psh_hom(a.as_psh(), b.as_psh())
                .into_iter()
                .map(Mor::Psh)
                .collect(),
            CatKind::Full { parent, .. } => parent.hom(a, b),
            CatKind::Product(ca, cb) => {
                let (a1, a2) = a.as_pair();
                let (b1, b2) = b.as_pair();
                let mut out = Vec::new();
                for f in ca.hom(a1, b1) {
                    for g in cb.hom(a2, b2) {
                        out.push(Mor::pair(f.clone(), g));
                    }
                }
                out
            }
            CatKind::Gl(func) => {
                let (ga, gb) = (a.as_gl(), b.as_gl());
                let n_cat = func.target();
                let h_cat = func.source();
                let mut out = Vec::new();
                for g in h_cat.hom(&ga.part_h, &gb.part_h) {
                    let fg = func.on_mor(&g);
                    for f in n_cat.hom(&ga.part_n, &gb.part_n) {
                        let lhs = comp(&gb.ell, &f);
                        let rhs = comp(&fg, &ga.ell);
                        if lhs == rhs {
                            out.push(Mor::gl(GlMor {
                                dom: ga.clone(),
                                cod: gb.clone(),
                                f: f.clone(),
                                g: g.clone(),
                            }));
                        }
                    }
                }
                out
            }
        }
    }

    /// A checked glueing morphism.
    pub fn gl_mor(&self, dom: &GlObj, cod: &GlObj, f: Mor, g: Mor) -> Result<Mor, CatError> {
        let func = self.gl_functor();
        let lhs = Mor::compose(&cod.ell, &f)?;
        let rhs = Mor::compose(&func.on_mor(&g), &dom.ell)?;
        if lhs != rhs {
            return Err(CatError::ShapeMismatch(
                "glueing square does not commute".into(),
            ));
        }
        Ok(Mor::gl(GlMor { dom: dom.clone(), cod: cod.clone(), f, g }))
    }

    // -- terminal / initial --------------------------------------------------

    pub fn terminal(&self) -> Obj {
        match &*self.0 {
            CatKind::Psh(b) => Obj::Psh(Presheaf::terminal(b.clone())),
            CatKind::Full { parent, membership } => match membership {
                // The slice's terminal is the subterminal itself.
                Membership::AdmitsMapTo(u) => u.clone(),
                _ => parent.terminal(),
            },
            CatKind::Product(a, b) => Obj::pair(a.terminal(), b.terminal()),
            CatKind::Gl(f) => {
                let n1 = f.target().terminal();
                let h1 = f.source().terminal();
                let ell = unique_to_terminal_like(&f.target(), &n1, &f.on_obj(&h1));
                Obj::gl(GlObj { part_n: n1, part_h: h1, ell })
            }
        }
    }

    /// The unique map into the chosen terminal.
    pub fn bang(&self, o: &Obj) -> Mor {
        match &*self.0 {
            CatKind::Psh(_) => Mor::Psh(PresheafMor::bang(o.as_psh())),
            CatKind::Full { parent, membership } => match membership {
                Membership::AdmitsMapTo(u) => {
                    let maps = parent.hom(o, u);
                    assert_eq!(maps.len(), 1, "slice members map uniquely into the subterminal");
                    maps.into_iter().next().unwrap()
                }
                _ => parent.bang(o),
            },
            CatKind::Product(a, b) => {
                let (o1, o2) = o.as_pair();
                Mor::pair(a.bang(o1), b.bang(o2))
            }
            CatKind::Gl(f) => {
                let t = self.terminal();
                let tg = t.as_gl();
                let og = o.as_gl();
                let bn = f.target().bang(&og.part_n);
                let bh = f.source().bang(&og.part_h);
                // The square commutes automatically: both routes land in a
                // terminal-like object of the N side.
                let f_part = retarget_unique(&f.target(), &og.part_n, &tg.part_n, &bn);
                let g_part = retarget_unique(&f.source(), &og.part_h, &tg.part_h, &bh);
                Mor::gl(GlMor { dom: og.clone(), cod: tg.clone(), f: f_part, g: g_part })
            }
        }
    }

    pub fn initial(&self) -> Result<Obj, CatError> {
        match &*self.0 {
            CatKind::Psh(b) => Ok(Obj::Psh(Presheaf::initial(b.clone()))),
            CatKind::Full { parent, membership } => match membership {
                Membership::AdmitsMapTo(_) => parent.initial(),
                // The kernel's initial object is the subterminal the
                // defining functor collapses.
                Membership::SentToTerminal(f) => kernel_initial(f),
                _ => parent.initial(),
            },
            CatKind::Product(a, b) => Ok(Obj::pair(a.initial()?, b.initial()?)),
            CatKind::Gl(f) => {
                let n0 = f.target().initial()?;
                let h0 = f.source().initial()?;
                let ell = f
                    .target()
                    .from_initial(&f.on_obj(&h0))?;
                debug_assert_eq!(ell.dom(), n0);
                Ok(Obj::gl(GlObj { part_n: n0, part_h: h0, ell }))
            }
        }
    }

    /// The unique map out of the chosen initial object.
    pub fn from_initial(&self, o: &Obj) -> Result<Mor, CatError> {
        match &*self.0 {
            CatKind::Psh(_) => Ok(Mor::Psh(PresheafMor::from_initial(o.as_psh()))),
            CatKind::Full { parent, membership } => match membership {
                Membership::SentToTerminal(_) => {
                    let u = self.initial()?;
                    let maps = parent.hom(&u, o);
                    if maps.len() != 1 {
                        return Err(CatError::Unsupported(format!(
                            "expected a unique map out of the kernel initial, found {}",
                            maps.len()
                        )));
                    }
                    Ok(maps.into_iter().next().unwrap())
                }
                _ => parent.from_initial(o),
            },
            CatKind::Product(a, b) => {
                let (o1, o2) = o.as_pair();
                Ok(Mor::pair(a.from_initial(o1)?, b.from_initial(o2)?))
            }
            CatKind::Gl(f) => {
                let z = self.initial()?;
                let zg = z.as_gl();
                let og = o.as_gl();
                let f_part = f.target().from_initial(&og.part_n)?;
                let g_part = f.source().from_initial(&og.part_h)?;
                self.gl_mor(zg, og, f_part, g_part)
            }
        }
    }

    /// True when the object is isomorphic to the chosen terminal.
    pub fn is_terminal_like(&self, o: &Obj) -> bool {
        match &*self.0 {
            CatKind::Psh(_) => o.as_psh().components().iter().all(|s| s.len() == 1),
            CatKind::Full { parent, membership } => match membership {
                Membership::AdmitsMapTo(u) => sizes_match(o, u),
                _ => parent.is_terminal_like(o),
            },
            CatKind::Product(a, b) => {
                let (o1, o2) = o.as_pair();
                a.is_terminal_like(o1) && b.is_terminal_like(o2)
            }
            CatKind::Gl(f) => {
                let g = o.as_gl();
                f.target().is_terminal_like(&g.part_n) && f.source().is_terminal_like(&g.part_h)
            }
        }
    }

    /// True when some isomorphism `a -> b` exists, found by enumeration.
    pub fn isomorphic(&self, a: &Obj, b: &Obj) -> bool {
        a == b || self.hom(a, b).iter().any(Mor::is_iso)
    }

    /// The unique morphism `a -> b`; errors unless the hom-set is a singleton.
    pub fn unique_to(&self, a: &Obj, b: &Obj) -> Result<Mor, CatError> {
        let maps = self.hom(a, b);
        if maps.len() != 1 {
            return Err(CatError::Unsupported(format!(
                "expected a unique morphism, found {}",
                maps.len()
            )));
        }
        Ok(maps.into_iter().next().unwrap())
    }

    // -- limits ---------------------------------------------------------------

    /// Chosen pullback of a cospan `f : X -> Z <- Y : g`.
    pub fn pullback(&self, f: &Mor, g: &Mor) -> Result<PullbackSquare, CatError> {
        if f.cod() != g.cod() {
            return Err(CatError::ShapeMismatch("pullback needs a cospan".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let (apex, p1, p2) = psh_pullback(f.as_psh(), g.as_psh());
                Ok(PullbackSquare {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::Psh(apex),
                    p1: Mor::Psh(p1),
                    p2: Mor::Psh(p2),
                })
            }
            CatKind::Full { parent, .. } => {
                let sq = parent.pullback(f, g)?;
                Ok(sq)
            }
            CatKind::Product(a, b) => {
                let (f1, f2) = f.as_pair();
                let (g1, g2) = g.as_pair();
                let sa = a.pullback(f1, g1)?;
                let sb = b.pullback(f2, g2)?;
                Ok(PullbackSquare {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::pair(sa.apex, sb.apex),
                    p1: Mor::pair(sa.p1, sb.p1),
                    p2: Mor::pair(sa.p2, sb.p2),
                })
            }
            CatKind::Gl(func) => {
                let (fm, gm) = (f.as_gl(), g.as_gl());
                let n_cat = func.target();
                let h_cat = func.source();
                let sq_n = n_cat.pullback(&fm.f, &gm.f)?;
                let sq_h = h_cat.pullback(&fm.g, &gm.g)?;
                // Induce ell on the apex through the comparison with the
                // chosen pullback of the F-image cospan.
                let fu = func.on_mor(&fm.g);
                let gu = func.on_mor(&gm.g);
                let sq_fn = n_cat.pullback(&fu, &gu)?;
                let k = n_cat.pullback_mediate(
                    &sq_fn,
                    &func.on_mor(&sq_h.p1),
                    &func.on_mor(&sq_h.p2),
                )?;
                let k_inv = k.inverse().ok_or_else(|| {
                    CatError::ShapeMismatch(
                        "glueing functor does not preserve this pullback".into(),
                    )
                })?;
                let m = n_cat.pullback_mediate(
                    &sq_fn,
                    &comp(&fm.dom.ell, &sq_n.p1),
                    &comp(&gm.dom.ell, &sq_n.p2),
                )?;
                let ell = comp(&k_inv, &m);
                let apex = GlObj {
                    part_n: sq_n.apex.clone(),
                    part_h: sq_h.apex.clone(),
                    ell,
                };
                let p1 = self.gl_mor(&apex, &fm.dom, sq_n.p1, sq_h.p1)?;
                let p2 = self.gl_mor(&apex, &gm.dom, sq_n.p2, sq_h.p2)?;
                Ok(PullbackSquare {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::gl(apex),
                    p1,
                    p2,
                })
            }
        }
    }

    /// Mediates a cone `(p, q)` through a chosen pullback square.
    pub fn pullback_mediate(
        &self,
        sq: &PullbackSquare,
        p: &Mor,
        q: &Mor,
    ) -> Result<Mor, CatError> {
        if p.dom() != q.dom() {
            return Err(CatError::NonCone("legs have different sources".into()));
        }
        if Mor::compose(&sq.f, p).ok() != Mor::compose(&sq.g, q).ok() {
            return Err(CatError::NonCone("square does not commute".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let m = presheaf::psh_pullback_mediate(
                    sq.f.as_psh(),
                    sq.g.as_psh(),
                    p.as_psh(),
                    q.as_psh(),
                )
                .map_err(|e| CatError::NonCone(e.to_string()))?;
                Ok(Mor::Psh(m))
            }
            CatKind::Full { parent, .. } => parent.pullback_mediate(sq, p, q),
            CatKind::Product(a, b) => {
                let sa = a.pullback(sq.f.as_pair().0, sq.g.as_pair().0)?;
                let sb = b.pullback(sq.f.as_pair().1, sq.g.as_pair().1)?;
                let ma = a.pullback_mediate(&sa, p.as_pair().0, q.as_pair().0)?;
                let mb = b.pullback_mediate(&sb, p.as_pair().1, q.as_pair().1)?;
                Ok(Mor::pair(ma, mb))
            }
            CatKind::Gl(func) => {
                let n_cat = func.target();
                let h_cat = func.source();
                let (fm, gm) = (sq.f.as_gl(), sq.g.as_gl());
                let sq_n = n_cat.pullback(&fm.f, &gm.f)?;
                let sq_h = h_cat.pullback(&fm.g, &gm.g)?;
                let (pm, qm) = (p.as_gl(), q.as_gl());
                let mn = n_cat.pullback_mediate(&sq_n, &pm.f, &qm.f)?;
                let mh = h_cat.pullback_mediate(&sq_h, &pm.g, &qm.g)?;
                self.gl_mor(&pm.dom, sq.apex.as_gl(), mn, mh)
            }
        }
    }

    /// Chosen binary product with pair labels.
    pub fn product_cone(&self, a: &Obj, b: &Obj) -> Result<ProductCone, CatError> {
        let sq = self.pullback(&self.bang(a), &self.bang(b))?;
        Ok(ProductCone { a: a.clone(), b: b.clone(), apex: sq.apex, p1: sq.p1, p2: sq.p2 })
    }

    pub fn product_mediate(
        &self,
        cone: &ProductCone,
        p: &Mor,
        q: &Mor,
    ) -> Result<Mor, CatError> {
        let sq = self.pullback(&self.bang(&cone.a), &self.bang(&cone.b))?;
        self.pullback_mediate(&sq, p, q)
    }

    /// Chosen equalizer of a parallel pair.
    pub fn equalizer(&self, f: &Mor, g: &Mor) -> Result<EqualizerFork, CatError> {
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(CatError::ShapeMismatch("equalizer needs a parallel pair".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let (apex, incl) = psh_equalizer(f.as_psh(), g.as_psh());
                Ok(EqualizerFork {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::Psh(apex),
                    incl: Mor::Psh(incl),
                })
            }
            CatKind::Full { parent, .. } => parent.equalizer(f, g),
            CatKind::Product(a, b) => {
                let ea = a.equalizer(f.as_pair().0, g.as_pair().0)?;
                let eb = b.equalizer(f.as_pair().1, g.as_pair().1)?;
                Ok(EqualizerFork {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::pair(ea.apex, eb.apex),
                    incl: Mor::pair(ea.incl, eb.incl),
                })
            }
            CatKind::Gl(func) => {
                let n_cat = func.target();
                let h_cat = func.source();
                let (fm, gm) = (f.as_gl(), g.as_gl());
                let en = n_cat.equalizer(&fm.f, &gm.f)?;
                let eh = h_cat.equalizer(&fm.g, &gm.g)?;
                let f_incl = func.on_mor(&eh.incl);
                let target_eq = n_cat.equalizer(&func.on_mor(&fm.g), &func.on_mor(&gm.g))?;
                let k = n_cat.equalizer_mediate(&target_eq, &f_incl)?;
                let k_inv = k.inverse().ok_or_else(|| {
                    CatError::ShapeMismatch(
                        "glueing functor does not preserve this equalizer".into(),
                    )
                })?;
                let m = n_cat
                    .equalizer_mediate(&target_eq, &comp(&fm.dom.ell, &en.incl))?;
                let ell = comp(&k_inv, &m);
                let apex = GlObj { part_n: en.apex, part_h: eh.apex, ell };
                let incl = self.gl_mor(&apex, &fm.dom, en.incl, eh.incl)?;
                Ok(EqualizerFork { f: f.clone(), g: g.clone(), apex: Obj::gl(apex), incl })
            }
        }
    }

    pub fn equalizer_mediate(&self, fork: &EqualizerFork, t: &Mor) -> Result<Mor, CatError> {
        if Mor::compose(&fork.f, t).ok() != Mor::compose(&fork.g, t).ok() {
            return Err(CatError::NonCone("map does not equalize the pair".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let m = presheaf::psh_equalizer_mediate(
                    fork.f.as_psh(),
                    fork.g.as_psh(),
                    t.as_psh(),
                )
                .map_err(|e| CatError::NonCone(e.to_string()))?;
                Ok(Mor::Psh(m))
            }
            CatKind::Full { parent, .. } => parent.equalizer_mediate(fork, t),
            CatKind::Product(a, b) => {
                let ea = a.equalizer(fork.f.as_pair().0, fork.g.as_pair().0)?;
                let eb = b.equalizer(fork.f.as_pair().1, fork.g.as_pair().1)?;
                let ma = a.equalizer_mediate(&ea, t.as_pair().0)?;
                let mb = b.equalizer_mediate(&eb, t.as_pair().1)?;
                Ok(Mor::pair(ma, mb))
            }
            CatKind::Gl(func) => {
                let n_cat = func.target();
                let h_cat = func.source();
                let (fm, gm) = (fork.f.as_gl(), fork.g.as_gl());
                let en = n_cat.equalizer(&fm.f, &gm.f)?;
                let eh = h_cat.equalizer(&fm.g, &gm.g)?;
                let tm = t.as_gl();
                let mn = n_cat.equalizer_mediate(&en, &tm.f)?;
                let mh = h_cat.equalizer_mediate(&eh, &tm.g)?;
                self.gl_mor(&tm.dom, fork.apex.as_gl(), mn, mh)
            }
        }
    }

    // -- colimits ---------------------------------------------------------------

    /// Chosen coproduct with tagged labels. Supported on presheaf-backed
    /// categories and products of such.
    pub fn coproduct(&self, a: &Obj, b: &Obj) -> Result<CoproductCocone, CatError> {
        match &*self.0 {
            CatKind::Psh(_) => {
                let (apex, i1, i2) = psh_coproduct(a.as_psh(), b.as_psh());
                Ok(CoproductCocone {
                    a: a.clone(),
                    b: b.clone(),
                    apex: Obj::Psh(apex),
                    i1: Mor::Psh(i1),
                    i2: Mor::Psh(i2),
                })
            }
            CatKind::Full { parent, membership } => match membership {
                Membership::All | Membership::AdmitsMapTo(_) => parent.coproduct(a, b),
                _ => Err(CatError::Unsupported("coproducts in this subcategory".into())),
            },
            CatKind::Product(ca, cb) => {
                let sa = ca.coproduct(a.as_pair().0, b.as_pair().0)?;
                let sb = cb.coproduct(a.as_pair().1, b.as_pair().1)?;
                Ok(CoproductCocone {
                    a: a.clone(),
                    b: b.clone(),
                    apex: Obj::pair(sa.apex, sb.apex),
                    i1: Mor::pair(sa.i1, sb.i1),
                    i2: Mor::pair(sa.i2, sb.i2),
                })
            }
            CatKind::Gl(_) => Err(CatError::Unsupported("coproducts in a glueing".into())),
        }
    }

    /// Chosen pushout of a span `f : A -> B`, `g : A -> C`.
    pub fn pushout(&self, f: &Mor, g: &Mor) -> Result<PushoutSquare, CatError> {
        if f.dom() != g.dom() {
            return Err(CatError::ShapeMismatch("pushout needs a span".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let (apex, i1, i2) = psh_pushout(f.as_psh(), g.as_psh());
                Ok(PushoutSquare {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::Psh(apex),
                    i1: Mor::Psh(i1),
                    i2: Mor::Psh(i2),
                })
            }
            CatKind::Full { parent, membership } => match membership {
                Membership::All | Membership::AdmitsMapTo(_) => parent.pushout(f, g),
                _ => Err(CatError::Unsupported("pushouts in this subcategory".into())),
            },
            CatKind::Product(a, b) => {
                let sa = a.pushout(f.as_pair().0, g.as_pair().0)?;
                let sb = b.pushout(f.as_pair().1, g.as_pair().1)?;
                Ok(PushoutSquare {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::pair(sa.apex, sb.apex),
                    i1: Mor::pair(sa.i1, sb.i1),
                    i2: Mor::pair(sa.i2, sb.i2),
                })
            }
            CatKind::Gl(_) => Err(CatError::Unsupported("pushouts in a glueing".into())),
        }
    }

    pub fn pushout_comediate(
        &self,
        sq: &PushoutSquare,
        p: &Mor,
        q: &Mor,
    ) -> Result<Mor, CatError> {
        if p.cod() != q.cod() {
            return Err(CatError::NonCocone("legs have different targets".into()));
        }
        if Mor::compose(p, &sq.f).ok() != Mor::compose(q, &sq.g).ok() {
            return Err(CatError::NonCocone("square does not commute".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let m = presheaf::psh_pushout_comediate(
                    sq.f.as_psh(),
                    sq.g.as_psh(),
                    p.as_psh(),
                    q.as_psh(),
                )
                .map_err(|e| CatError::NonCocone(e.to_string()))?;
                Ok(Mor::Psh(m))
            }
            CatKind::Full { parent, .. } => parent.pushout_comediate(sq, p, q),
            CatKind::Product(a, b) => {
                let sa = a.pushout(sq.f.as_pair().0, sq.g.as_pair().0)?;
                let sb = b.pushout(sq.f.as_pair().1, sq.g.as_pair().1)?;
                let ma = a.pushout_comediate(&sa, p.as_pair().0, q.as_pair().0)?;
                let mb = b.pushout_comediate(&sb, p.as_pair().1, q.as_pair().1)?;
                Ok(Mor::pair(ma, mb))
            }
            CatKind::Gl(_) => Err(CatError::Unsupported("pushouts in a glueing".into())),
        }
    }

    /// Chosen coequalizer of a parallel pair.
    pub fn coequalizer(&self, f: &Mor, g: &Mor) -> Result<CoequalizerFork, CatError> {
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(CatError::ShapeMismatch("coequalizer needs a parallel pair".into()));
        }
        match &*self.0 {
            CatKind::Psh(_) => {
                let (apex, proj) = presheaf::psh_coequalizer(f.as_psh(), g.as_psh());
                Ok(CoequalizerFork {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::Psh(apex),
                    proj: Mor::Psh(proj),
                })
            }
            CatKind::Full { parent, membership } => match membership {
                Membership::All | Membership::AdmitsMapTo(_) => parent.coequalizer(f, g),
                _ => Err(CatError::Unsupported("coequalizers in this subcategory".into())),
            },
            CatKind::Product(a, b) => {
                let ea = a.coequalizer(f.as_pair().0, g.as_pair().0)?;
                let eb = b.coequalizer(f.as_pair().1, g.as_pair().1)?;
                Ok(CoequalizerFork {
                    f: f.clone(),
                    g: g.clone(),
                    apex: Obj::pair(ea.apex, eb.apex),
                    proj: Mor::pair(ea.proj, eb.proj),
                })
            }
            CatKind::Gl(_) => Err(CatError::Unsupported("coequalizers in a glueing".into())),
        }
    }
}

// ---------------------------------------------------------------------------
// Cone and cocone values
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackSquare {
    pub f: Mor,
    pub g: Mor,
    pub apex: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCone {
    pub a: Obj,
    pub b: Obj,
    pub apex: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualizerFork {
    pub f: Mor,
    pub g: Mor,
    pub apex: Obj,
    pub incl: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductCocone {
    pub a: Obj,
    pub b: Obj,
    pub apex: Obj,
    pub i1: Mor,
    pub i2: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutSquare {
    pub f: Mor,
    pub g: Mor,
    pub apex: Obj,
    pub i1: Mor,
    pub i2: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoequalizerFork {
    pub f: Mor,
    pub g: Mor,
    pub apex: Obj,
    pub proj: Mor,
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

/// The unique map `a -> b` where `b` is terminal-like, built directly from
/// the forced component tables.
pub fn unique_to_terminal_like(cat: &Cat, a: &Obj, b: &Obj) -> Mor {
    debug_assert!(cat.is_terminal_like(b), "target must be terminal-like");
    match (a, b) {
        (Obj::Psh(pa), Obj::Psh(pb)) => {
            let m = presheaf::PresheafMor::from_fn(pa, pb, |c, _| {
                pb.at(c).elements()[0].clone()
            })
            .expect("forced map into a terminal-like presheaf is natural");
            Mor::Psh(m)
        }
        (Obj::Pair(pa), Obj::Pair(pb)) => {
            let (c1, c2) = match cat.kind() {
                CatKind::Product(c1, c2) => (c1, c2),
                _ => panic!("pair objects live in product categories"),
            };
            Mor::pair(
                unique_to_terminal_like(c1, &pa.0, &pb.0),
                unique_to_terminal_like(c2, &pa.1, &pb.1),
            )
        }
        (Obj::Gl(ga), Obj::Gl(gb)) => {
            let f = cat.gl_functor();
            Mor::gl(GlMor {
                dom: (**ga).clone(),
                cod: (**gb).clone(),
                f: unique_to_terminal_like(&f.target(), &ga.part_n, &gb.part_n),
                g: unique_to_terminal_like(&f.source(), &ga.part_h, &gb.part_h),
            })
        }
        _ => panic!("mismatched object shapes"),
    }
}

/// Rebuilds a map whose target is terminal-like so that its codomain is the
/// stated object (used where two routes to "the" terminal differ in value).
fn retarget_unique(cat: &Cat, from: &Obj, to: &Obj, _hint: &Mor) -> Mor {
    unique_to_terminal_like(cat, from, to)
}

fn sizes_match(a: &Obj, b: &Obj) -> bool {
    fn sizes(o: &Obj, out: &mut Vec<usize>) {
        match o {
            Obj::Psh(p) => out.extend(p.components().iter().map(|s| s.len())),
            Obj::Pair(p) => {
                sizes(&p.0, out);
                sizes(&p.1, out);
            }
            Obj::Gl(g) => {
                sizes(&g.part_n, out);
                sizes(&g.part_h, out);
            }
        }
    }
    let mut sa = Vec::new();
    let mut sb = Vec::new();
    sizes(a, &mut sa);
    sizes(b, &mut sb);
    sa == sb
}

fn kernel_initial(f: &Functor) -> Result<Obj, CatError> {
    use crate::functor::FunctorKind;
    match f.kind() {
        FunctorKind::TimesU { u, .. } => Ok(u.clone()),
        FunctorKind::Pi2(gl) => {
            let func = gl.gl_functor();
            let n0 = func.target().initial()?;
            gl_pi1star_obj(gl, &n0)
        }
        _ => Err(CatError::Unsupported(
            "no designated initial object for this kernel".into(),
        )),
    }
}

fn gl_pi1star_obj(gl: &Cat, n: &Obj) -> Result<Obj, CatError> {
    let func = gl.gl_functor();
    let h1 = func.source().terminal();
    let ell = unique_to_terminal_like(&func.target(), n, &func.on_obj(&h1));
    Ok(Obj::gl(GlObj { part_n: n.clone(), part_h: h1, ell }))
}

/// Validating full-subcategory constructor: the membership must keep the
/// chosen terminal and be closed under chosen pullbacks of probe members.
pub fn full_subcategory(
    parent: &Cat,
    membership: Membership,
    probe_objects: &[Obj],
) -> Result<Cat, CatError> {
    let sub = Cat::full(parent.clone(), membership);
    let t = parent.terminal();
    if !sub.contains(&t) {
        return Err(CatError::NotLimitClosed(
            "the chosen terminal is not a member".into(),
        ));
    }
    let members: Vec<&Obj> = probe_objects.iter().filter(|o| sub.contains(o)).collect();
    for x in &members {
        for y in &members {
            for z in &members {
                for f in parent.hom(x, z) {
                    for g in parent.hom(y, z) {
                        let sq = parent.pullback(&f, &g)?;
                        if !sub.contains(&sq.apex) {
                            return Err(CatError::NotLimitClosed(format!(
                                "pullback of members {x} and {y} over {z} leaves the subcategory"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(sub)
}

/// The binary product category with componentwise structure.
pub fn product_category(a: &Cat, b: &Cat) -> Cat {
    Cat::product(a.clone(), b.clone())
}

/// The unit subterminal wrapper for presheaf toposes.
pub fn subterminal_obj(u: &Subterminal) -> Obj {
    Obj::Psh(u.presheaf().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseCat;
    use crate::probe::{probes_for, ProbeConfig};

    fn finset() -> Cat {
        Cat::psh(BaseCat::point())
    }

    fn finset2() -> Cat {
        Cat::psh(BaseCat::discrete("p2", &["l", "r"]))
    }

    #[test]
    fn category_laws_on_probes() {
        for cat in [finset(), finset2(), Cat::psh(BaseCat::arrow_base("sier", "a", "b", "r"))] {
            let probes = probes_for(&cat, &ProbeConfig::tiny());
            crate::laws::check_category(&cat, &probes).assert_passed();
        }
    }

    #[test]
    fn product_category_structure() {
        let prod = product_category(&finset(), &finset());
        let probes = probes_for(&prod, &ProbeConfig::tiny());
        crate::laws::check_category(&prod, &probes).assert_passed();
        let t = prod.terminal();
        let (t1, t2) = t.as_pair();
        assert!(finset().is_terminal_like(t1));
        assert!(finset().is_terminal_like(t2));
        // hom sizes multiply
        let a = &probes.objects[0];
        for b in &probes.objects {
            let (a1, a2) = a.as_pair();
            let (b1, b2) = b.as_pair();
            let n = prod.hom(a, b).len();
            let n1 = finset().hom(a1, b1).len();
            let n2 = finset().hom(a2, b2).len();
            assert_eq!(n, n1 * n2);
        }
    }

    #[test]
    fn full_subcategory_validation() {
        let fin = finset();
        let probes = probes_for(&fin, &ProbeConfig::with_size_cap(2));
        let all = full_subcategory(&fin, Membership::All, &probes.objects).unwrap();
        for o in &probes.objects {
            assert!(all.contains(o));
            assert_eq!(all.hom(o, o).len(), fin.hom(o, o).len());
        }
        let only_terminal =
            full_subcategory(&fin, Membership::TerminalLike, &probes.objects).unwrap();
        let t = only_terminal.terminal();
        assert_eq!(only_terminal.hom(&t, &t).len(), 1);
        // Size bounds are not closed under pullbacks: two 2-element sets over
        // the terminal have a 4-element apex.
        let err = full_subcategory(&fin, Membership::SizeAtMost(2), &probes.objects).unwrap_err();
        assert!(matches!(err, CatError::NotLimitClosed(_)));
    }

    #[test]
    fn pullback_universal_property_in_finset2() {
        let cat = finset2();
        let probes = probes_for(&cat, &ProbeConfig::tiny());
        let mut checked = 0;
        for (f, g) in probes.cospans().into_iter().take(12) {
            let sq = cat.pullback(f, g).unwrap();
            crate::laws::check_pullback_square(&cat, &sq, &probes).assert_passed();
            checked += 1;
        }
        assert!(checked > 0);
    }
}
