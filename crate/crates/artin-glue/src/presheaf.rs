//! Presheaves of finite sets on a finite base category, their morphisms, and
//! the pointwise (co)limit machinery. These are the objects and arrows of
//! every concrete topos in this crate.

use crate::base::BaseCat;
use crate::finset::{
    self, colimit, limit, ColimitDiagram, FinFn, FinSet, FinSetError, LimitDiagram,
};
use crate::label::Label;
use std::rc::Rc;
use thiserror::Error;

macro_rules! memoize {
    ($cache:ident : $key_ty:ty => $val_ty:ty, $key:expr, $compute:expr) => {{
        thread_local! {
            static $cache: std::cell::RefCell<std::collections::BTreeMap<$key_ty, $val_ty>> =
                std::cell::RefCell::new(std::collections::BTreeMap::new());
        }
        let key = $key;
        if let Some(hit) = $cache.with(|c| c.borrow().get(&key).cloned()) {
            hit
        } else {
            let out = $compute;
            $cache.with(|c| c.borrow_mut().insert(key, out.clone()));
            out
        }
    }};
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresheafError {
    #[error("presheaf data is not functorial: {0}")]
    NotFunctorial(String),
    #[error("morphism components are not natural: {0}")]
    NotNatural(String),
    #[error("component shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a subterminal: {0}")]
    NotSubterminal(String),
    #[error(transparent)]
    FinSet(#[from] FinSetError),
}

/// A contravariant finite-set-valued functor on a finite base, given by
/// per-object sets and per-arrow restriction tables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Presheaf {
    base: Rc<BaseCat>,
    /// Indexed by base object.
    at: Vec<FinSet>,
    /// Indexed by base arrow `a : c -> c'`; the table maps `at[c'] -> at[c]`.
    restrict: Vec<FinFn>,
}

impl Presheaf {
    pub fn new(
        base: Rc<BaseCat>,
        at: Vec<FinSet>,
        restrict: Vec<FinFn>,
    ) -> Result<Presheaf, PresheafError> {
        let p = Presheaf { base, at, restrict };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), PresheafError> {
        if self.at.len() != self.base.object_count()
            || self.restrict.len() != self.base.arrows().len()
        {
            return Err(PresheafError::ShapeMismatch(
                "component counts do not match the base".into(),
            ));
        }
        for (i, a) in self.base.arrows().iter().enumerate() {
            let r = &self.restrict[i];
            if r.dom() != &self.at[a.tgt] || r.cod() != &self.at[a.src] {
                return Err(PresheafError::ShapeMismatch(format!(
                    "restriction along {} has the wrong boundary",
                    a.name
                )));
            }
        }
        for (i, _) in self.base.objects().iter().enumerate() {
            if !self.restrict[self.base.identity_of(i)].is_identity() {
                return Err(PresheafError::NotFunctorial(format!(
                    "restriction along id_{} is not the identity",
                    self.base.objects()[i]
                )));
            }
        }
        for (fi, fa) in self.base.arrows().iter().enumerate() {
            for (gi, ga) in self.base.arrows().iter().enumerate() {
                if fa.tgt != ga.src {
                    continue;
                }
                let gf = self.base.compose_arrows(fi, gi);
                let lhs = &self.restrict[gf];
                let rhs = finset::compose(&self.restrict[fi], &self.restrict[gi])?;
                if lhs != &rhs {
                    return Err(PresheafError::NotFunctorial(format!(
                        "restriction along {} then {} disagrees with the composite",
                        ga.name, fa.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Rc<BaseCat> {
        &self.base
    }

    pub fn at(&self, obj: usize) -> &FinSet {
        &self.at[obj]
    }

    pub fn components(&self) -> &[FinSet] {
        &self.at
    }

    pub fn restriction(&self, arrow: usize) -> &FinFn {
        &self.restrict[arrow]
    }

    /// Total number of elements across components.
    pub fn size(&self) -> usize {
        self.at.iter().map(|s| s.len()).sum()
    }

    /// The chosen terminal presheaf: a point at every base object.
    pub fn terminal(base: Rc<BaseCat>) -> Presheaf {
        let at = vec![FinSet::unit(); base.object_count()];
        let restrict = base
            .arrows()
            .iter()
            .map(|_| FinFn::identity(&FinSet::unit()))
            .collect();
        Presheaf { base, at, restrict }
    }

    /// The chosen initial presheaf: empty everywhere.
    pub fn initial(base: Rc<BaseCat>) -> Presheaf {
        let at = vec![FinSet::empty(); base.object_count()];
        let restrict = base
            .arrows()
            .iter()
            .map(|_| FinFn::identity(&FinSet::empty()))
            .collect();
        Presheaf { base, at, restrict }
    }

    /// Builds a presheaf from per-object sets and a function giving each
    /// non-identity arrow's restriction table.
    pub fn from_parts(
        base: Rc<BaseCat>,
        at: Vec<FinSet>,
        mut restriction_of: impl FnMut(usize) -> FinFn,
    ) -> Result<Presheaf, PresheafError> {
        let restrict = (0..base.arrows().len())
            .map(|i| {
                if base.is_identity_arrow(i) {
                    FinFn::identity(&at[base.arrows()[i].src])
                } else {
                    restriction_of(i)
                }
            })
            .collect();
        Presheaf::new(base, at, restrict)
    }
}

/// A morphism of presheaves: one function per base object, commuting with
/// every restriction map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PresheafMor {
    dom: Presheaf,
    cod: Presheaf,
    comps: Vec<FinFn>,
}

impl PresheafMor {
    pub fn new(
        dom: Presheaf,
        cod: Presheaf,
        comps: Vec<FinFn>,
    ) -> Result<PresheafMor, PresheafError> {
        let m = PresheafMor { dom, cod, comps };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), PresheafError> {
        let base = self.dom.base();
        if self.cod.base() != base {
            return Err(PresheafError::ShapeMismatch("bases differ".into()));
        }
        if self.comps.len() != base.object_count() {
            return Err(PresheafError::ShapeMismatch("component count".into()));
        }
        for (c, comp) in self.comps.iter().enumerate() {
            if comp.dom() != self.dom.at(c) || comp.cod() != self.cod.at(c) {
                return Err(PresheafError::ShapeMismatch(format!(
                    "component at {} has the wrong boundary",
                    base.objects()[c]
                )));
            }
        }
        for (i, a) in base.arrows().iter().enumerate() {
            if base.is_identity_arrow(i) {
                continue;
            }
            let lhs = finset::compose(&self.comps[a.src], self.dom.restriction(i))?;
            let rhs = finset::compose(self.cod.restriction(i), &self.comps[a.tgt])?;
            if lhs != rhs {
                return Err(PresheafError::NotNatural(format!(
                    "square at {} does not commute",
                    a.name
                )));
            }
        }
        Ok(())
    }

    pub fn from_fn(
        dom: &Presheaf,
        cod: &Presheaf,
        f: impl Fn(usize, &Label) -> Label,
    ) -> Result<PresheafMor, PresheafError> {
        let comps = (0..dom.base().object_count())
            .map(|c| FinFn::from_fn(dom.at(c).clone(), cod.at(c).clone(), |l| f(c, l)))
            .collect::<Result<Vec<_>, _>>()?;
        PresheafMor::new(dom.clone(), cod.clone(), comps)
    }

    pub fn identity(p: &Presheaf) -> PresheafMor {
        PresheafMor {
            dom: p.clone(),
            cod: p.clone(),
            comps: p.components().iter().map(FinFn::identity).collect(),
        }
    }

    pub fn dom(&self) -> &Presheaf {
        &self.dom
    }

    pub fn cod(&self) -> &Presheaf {
        &self.cod
    }

    pub fn component(&self, obj: usize) -> &FinFn {
        &self.comps[obj]
    }

    pub fn components(&self) -> &[FinFn] {
        &self.comps
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(FinFn::is_bijective)
    }

    pub fn is_identity(&self) -> bool {
        self.comps.iter().all(FinFn::is_identity)
    }

    pub fn inverse(&self) -> Option<PresheafMor> {
        let comps = self
            .comps
            .iter()
            .map(FinFn::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(PresheafMor { dom: self.cod.clone(), cod: self.dom.clone(), comps })
    }

    /// The unique morphism into the terminal presheaf.
    pub fn bang(p: &Presheaf) -> PresheafMor {
        let cod = Presheaf::terminal(p.base().clone());
        PresheafMor {
            dom: p.clone(),
            cod,
            comps: p.components().iter().map(FinFn::bang).collect(),
        }
    }

    /// The unique morphism out of the initial presheaf.
    pub fn from_initial(p: &Presheaf) -> PresheafMor {
        let dom = Presheaf::initial(p.base().clone());
        let comps = p
            .components()
            .iter()
            .map(|s| FinFn::from_fn(FinSet::empty(), s.clone(), |_| unreachable!()).unwrap())
            .collect();
        PresheafMor { dom, cod: p.clone(), comps }
    }
}

pub fn psh_compose(g: &PresheafMor, f: &PresheafMor) -> Result<PresheafMor, PresheafError> {
    if f.cod != g.dom {
        return Err(PresheafError::ShapeMismatch(
            "composition boundary mismatch".into(),
        ));
    }
    let comps = g
        .comps
        .iter()
        .zip(f.comps.iter())
        .map(|(gc, fc)| finset::compose(gc, fc))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresheafMor { dom: f.dom.clone(), cod: g.cod.clone(), comps })
}

// ---------------------------------------------------------------------------
// Pointwise limits and colimits
// ---------------------------------------------------------------------------

fn induced_restriction(
    base: &Rc<BaseCat>,
    apex_at: &[FinSet],
    arrow: usize,
    on_label: impl Fn(usize, &Label) -> Label,
) -> FinFn {
    let a = &base.arrows()[arrow];
    FinFn::from_fn(apex_at[a.tgt].clone(), apex_at[a.src].clone(), |l| on_label(arrow, l))
        .expect("induced restriction lands in the apex component")
}

/// Chosen product, computed per base object with pair labels.
pub fn psh_product(a: &Presheaf, b: &Presheaf) -> (Presheaf, PresheafMor, PresheafMor) {
    memoize!(PRODUCT_CACHE: (Presheaf, Presheaf) => (Presheaf, PresheafMor, PresheafMor),
        (a.clone(), b.clone()),
        psh_product_uncached(a, b))
}

fn psh_product_uncached(a: &Presheaf, b: &Presheaf) -> (Presheaf, PresheafMor, PresheafMor) {
    let base = a.base().clone();
    let cones: Vec<_> = (0..base.object_count())
        .map(|c| limit(LimitDiagram::Product(a.at(c).clone(), b.at(c).clone())))
        .collect();
    let at: Vec<FinSet> = cones.iter().map(|c| c.apex.clone()).collect();
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            induced_restriction(&base, &at, i, |arrow, l| match l {
                Label::Pair(x, y) => Label::pair(
                    a.restriction(arrow).apply(x).clone(),
                    b.restriction(arrow).apply(y).clone(),
                ),
                _ => unreachable!(),
            })
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let p1 = PresheafMor {
        dom: apex.clone(),
        cod: a.clone(),
        comps: cones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    let p2 = PresheafMor {
        dom: apex.clone(),
        cod: b.clone(),
        comps: cones.iter().map(|c| c.legs[1].clone()).collect(),
    };
    (apex, p1, p2)
}

/// Chosen pullback of a cospan `f : A -> C <- B : g`.
pub fn psh_pullback(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor, PresheafMor) {
    memoize!(PULLBACK_CACHE: (PresheafMor, PresheafMor) => (Presheaf, PresheafMor, PresheafMor),
        (f.clone(), g.clone()),
        psh_pullback_uncached(f, g))
}

fn psh_pullback_uncached(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor, PresheafMor) {
    assert_eq!(f.cod(), g.cod(), "pullback needs a cospan");
    let base = f.dom().base().clone();
    let cones: Vec<_> = (0..base.object_count())
        .map(|c| limit(LimitDiagram::Pullback(f.component(c).clone(), g.component(c).clone())))
        .collect();
    let at: Vec<FinSet> = cones.iter().map(|c| c.apex.clone()).collect();
    let (a, b) = (f.dom(), g.dom());
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            induced_restriction(&base, &at, i, |arrow, l| match l {
                Label::Pair(x, y) => Label::pair(
                    a.restriction(arrow).apply(x).clone(),
                    b.restriction(arrow).apply(y).clone(),
                ),
                _ => unreachable!(),
            })
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let p1 = PresheafMor {
        dom: apex.clone(),
        cod: a.clone(),
        comps: cones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    let p2 = PresheafMor {
        dom: apex.clone(),
        cod: b.clone(),
        comps: cones.iter().map(|c| c.legs[1].clone()).collect(),
    };
    (apex, p1, p2)
}

/// Mediates a cone `(p, q)` through the chosen pullback of `(f, g)`.
pub fn psh_pullback_mediate(
    f: &PresheafMor,
    g: &PresheafMor,
    p: &PresheafMor,
    q: &PresheafMor,
) -> Result<PresheafMor, PresheafError> {
    let (apex, _, _) = psh_pullback(f, g);
    let base = apex.base().clone();
    let comps = (0..base.object_count())
        .map(|c| {
            let cone = limit(LimitDiagram::Pullback(
                f.component(c).clone(),
                g.component(c).clone(),
            ));
            cone.mediate(&[p.component(c).clone(), q.component(c).clone()])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresheafMor { dom: p.dom().clone(), cod: apex, comps })
}

/// Chosen equalizer of a parallel pair.
pub fn psh_equalizer(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor) {
    memoize!(EQUALIZER_CACHE: (PresheafMor, PresheafMor) => (Presheaf, PresheafMor),
        (f.clone(), g.clone()),
        psh_equalizer_uncached(f, g))
}

fn psh_equalizer_uncached(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor) {
    assert_eq!(f.dom(), g.dom());
    assert_eq!(f.cod(), g.cod());
    let base = f.dom().base().clone();
    let cones: Vec<_> = (0..base.object_count())
        .map(|c| limit(LimitDiagram::Equalizer(f.component(c).clone(), g.component(c).clone())))
        .collect();
    let at: Vec<FinSet> = cones.iter().map(|c| c.apex.clone()).collect();
    let a = f.dom();
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            induced_restriction(&base, &at, i, |arrow, l| a.restriction(arrow).apply(l).clone())
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let incl = PresheafMor {
        dom: apex.clone(),
        cod: a.clone(),
        comps: cones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    (apex, incl)
}

pub fn psh_equalizer_mediate(
    f: &PresheafMor,
    g: &PresheafMor,
    p: &PresheafMor,
) -> Result<PresheafMor, PresheafError> {
    let (apex, _) = psh_equalizer(f, g);
    let comps = (0..apex.base().object_count())
        .map(|c| {
            let cone = limit(LimitDiagram::Equalizer(
                f.component(c).clone(),
                g.component(c).clone(),
            ));
            cone.mediate(&[p.component(c).clone()])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresheafMor { dom: p.dom().clone(), cod: apex, comps })
}

/// Chosen coproduct with tagged labels.
pub fn psh_coproduct(a: &Presheaf, b: &Presheaf) -> (Presheaf, PresheafMor, PresheafMor) {
    memoize!(COPRODUCT_CACHE: (Presheaf, Presheaf) => (Presheaf, PresheafMor, PresheafMor),
        (a.clone(), b.clone()),
        psh_coproduct_uncached(a, b))
}

fn psh_coproduct_uncached(a: &Presheaf, b: &Presheaf) -> (Presheaf, PresheafMor, PresheafMor) {
    let base = a.base().clone();
    let cocones: Vec<_> = (0..base.object_count())
        .map(|c| colimit(ColimitDiagram::Coproduct(a.at(c).clone(), b.at(c).clone())))
        .collect();
    let at: Vec<FinSet> = cocones.iter().map(|c| c.apex.clone()).collect();
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            induced_restriction(&base, &at, i, |arrow, l| match l {
                Label::Left(x) => Label::left(a.restriction(arrow).apply(x).clone()),
                Label::Right(x) => Label::right(b.restriction(arrow).apply(x).clone()),
                _ => unreachable!(),
            })
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let i1 = PresheafMor {
        dom: a.clone(),
        cod: apex.clone(),
        comps: cocones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    let i2 = PresheafMor {
        dom: b.clone(),
        cod: apex.clone(),
        comps: cocones.iter().map(|c| c.legs[1].clone()).collect(),
    };
    (apex, i1, i2)
}

/// Chosen pushout of a span `f : A -> B`, `g : A -> C`, computed per object
/// by union-find with least-member class representatives.
pub fn psh_pushout(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor, PresheafMor) {
    memoize!(PUSHOUT_CACHE: (PresheafMor, PresheafMor) => (Presheaf, PresheafMor, PresheafMor),
        (f.clone(), g.clone()),
        psh_pushout_uncached(f, g))
}

fn psh_pushout_uncached(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor, PresheafMor) {
    assert_eq!(f.dom(), g.dom(), "pushout needs a span");
    let base = f.dom().base().clone();
    let cocones: Vec<_> = (0..base.object_count())
        .map(|c| colimit(ColimitDiagram::Pushout(f.component(c).clone(), g.component(c).clone())))
        .collect();
    let at: Vec<FinSet> = cocones.iter().map(|c| c.apex.clone()).collect();
    let (b, c_) = (f.cod(), g.cod());
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            let arrow = &base.arrows()[i];
            let src_cocone = &cocones[arrow.src];
            FinFn::from_fn(at[arrow.tgt].clone(), at[arrow.src].clone(), |rep| {
                // Restrict the class representative and project into the
                // class structure at the source object.
                let moved = match rep {
                    Label::Left(x) => Label::left(b.restriction(i).apply(x).clone()),
                    Label::Right(x) => Label::right(c_.restriction(i).apply(x).clone()),
                    _ => unreachable!(),
                };
                project_to_class(src_cocone, &moved)
            })
            .expect("restricted class lands in the source quotient")
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let i1 = PresheafMor {
        dom: b.clone(),
        cod: apex.clone(),
        comps: cocones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    let i2 = PresheafMor {
        dom: c_.clone(),
        cod: apex.clone(),
        comps: cocones.iter().map(|c| c.legs[1].clone()).collect(),
    };
    (apex, i1, i2)
}

fn project_to_class(cocone: &finset::ColimitCocone, tagged: &Label) -> Label {
    match (&cocone.diagram, tagged) {
        (ColimitDiagram::Pushout(..), Label::Left(x)) => cocone.legs[0].apply(x).clone(),
        (ColimitDiagram::Pushout(..), Label::Right(x)) => cocone.legs[1].apply(x).clone(),
        (ColimitDiagram::Coequalizer(..), l) => cocone.legs[0].apply(l).clone(),
        _ => unreachable!(),
    }
}

/// Chosen coequalizer of a parallel pair.
pub fn psh_coequalizer(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor) {
    memoize!(COEQUALIZER_CACHE: (PresheafMor, PresheafMor) => (Presheaf, PresheafMor),
        (f.clone(), g.clone()),
        psh_coequalizer_uncached(f, g))
}

fn psh_coequalizer_uncached(f: &PresheafMor, g: &PresheafMor) -> (Presheaf, PresheafMor) {
    assert_eq!(f.dom(), g.dom());
    assert_eq!(f.cod(), g.cod());
    let base = f.dom().base().clone();
    let cocones: Vec<_> = (0..base.object_count())
        .map(|c| {
            colimit(ColimitDiagram::Coequalizer(f.component(c).clone(), g.component(c).clone()))
        })
        .collect();
    let at: Vec<FinSet> = cocones.iter().map(|c| c.apex.clone()).collect();
    let b = f.cod();
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            let arrow = &base.arrows()[i];
            let src_cocone = &cocones[arrow.src];
            FinFn::from_fn(at[arrow.tgt].clone(), at[arrow.src].clone(), |rep| {
                let moved = b.restriction(i).apply(rep).clone();
                project_to_class(src_cocone, &moved)
            })
            .expect("restricted class lands in the source quotient")
        })
        .collect();
    let apex = Presheaf { base, at, restrict };
    let proj = PresheafMor {
        dom: b.clone(),
        cod: apex.clone(),
        comps: cocones.iter().map(|c| c.legs[0].clone()).collect(),
    };
    (apex, proj)
}

/// Mediates a cocone through a chosen pushout.
pub fn psh_pushout_comediate(
    f: &PresheafMor,
    g: &PresheafMor,
    p: &PresheafMor,
    q: &PresheafMor,
) -> Result<PresheafMor, PresheafError> {
    let (apex, _, _) = psh_pushout(f, g);
    let comps = (0..apex.base().object_count())
        .map(|c| {
            let cocone = colimit(ColimitDiagram::Pushout(
                f.component(c).clone(),
                g.component(c).clone(),
            ));
            cocone.comediate(&[p.component(c).clone(), q.component(c).clone()])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PresheafMor { dom: apex, cod: p.cod().clone(), comps })
}

// ---------------------------------------------------------------------------
// Subterminals and the exponential by a subterminal
// ---------------------------------------------------------------------------

/// A presheaf with at most one element at every base object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subterminal(Presheaf);

impl Subterminal {
    pub fn new(p: Presheaf) -> Result<Subterminal, PresheafError> {
        for (c, s) in p.components().iter().enumerate() {
            if s.len() > 1 {
                return Err(PresheafError::NotSubterminal(format!(
                    "component at {} has {} elements",
                    p.base().objects()[c],
                    s.len()
                )));
            }
        }
        Ok(Subterminal(p))
    }

    /// Builds the subterminal with the given support pattern, one flag per
    /// base object in declaration order.
    pub fn from_pattern(base: Rc<BaseCat>, pattern: &[bool]) -> Result<Subterminal, PresheafError> {
        assert_eq!(pattern.len(), base.object_count());
        let at: Vec<FinSet> = pattern
            .iter()
            .map(|&b| if b { FinSet::unit() } else { FinSet::empty() })
            .collect();
        let restrict = base
            .arrows()
            .iter()
            .map(|a| {
                FinFn::from_fn(at[a.tgt].clone(), at[a.src].clone(), |_| Label::Unit).map_err(
                    |_| {
                        PresheafError::NotSubterminal(format!(
                            "support is not closed under the arrow {}",
                            a.name
                        ))
                    },
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = Presheaf::new(base, at, restrict)?;
        Subterminal::new(p)
    }

    pub fn presheaf(&self) -> &Presheaf {
        &self.0
    }

    pub fn supported_at(&self, obj: usize) -> bool {
        !self.0.at(obj).is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.base().object_count())
            .filter(|&c| self.supported_at(c))
            .collect()
    }
}

/// All subterminals of the presheaf topos over `base`, ordered by their
/// support pattern read as a binary string in object order.
pub fn subterminal_enumerate(base: &Rc<BaseCat>) -> Vec<Subterminal> {
    let n = base.object_count();
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let pattern: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if let Ok(u) = Subterminal::from_pattern(base.clone(), &pattern) {
            out.push(u);
        }
    }
    out
}

/// The exponential `X^U` for a subterminal exponent, computed per base object
/// by enumerating natural families out of the representable at that object.
pub fn exp_by_subterminal(x: &Presheaf, u: &Subterminal) -> Presheaf {
    let key = (x.clone(), u.presheaf().clone());
    if let Some(hit) = EXP_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = exp_by_subterminal_uncached(x, u);
    EXP_CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

fn exp_by_subterminal_uncached(x: &Presheaf, u: &Subterminal) -> Presheaf {
    let base = x.base().clone();
    let support = u.support();
    let at: Vec<FinSet> = (0..base.object_count())
        .map(|c| FinSet::new(enumerate_families(x, &support, &base, c)))
        .collect();
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            let a = &base.arrows()[i];
            FinFn::from_fn(at[a.tgt].clone(), at[a.src].clone(), |fam| {
                // Precompose the family with the action of the arrow on the
                // representable: entries at (d, f : d -> src) read off the
                // original family at (d, a . f).
                let mut entries = Vec::new();
                for &d in &support {
                    for h in base.hom(d, a.src) {
                        let composite = base.compose_arrows(h, i);
                        let key = family_key(&base, d, h);
                        let val = family_lookup(fam, &family_key(&base, d, composite));
                        entries.push((key, val));
                    }
                }
                Label::graph(entries)
            })
            .expect("restricted family is natural")
        })
        .collect();
    Presheaf { base, at, restrict }
}

fn family_key(base: &Rc<BaseCat>, d: usize, arrow: usize) -> Label {
    Label::pair(
        Label::atom(base.objects()[d].clone()),
        Label::atom(base.arrows()[arrow].name.clone()),
    )
}

fn family_lookup(fam: &Label, key: &Label) -> Label {
    match fam {
        Label::Graph(entries) => entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .expect("family is total on its keys"),
        _ => unreachable!("exponential elements are family graphs"),
    }
}

/// All natural families `{ Hom(d, c) -> X(d) : d in support }` as graph labels.
fn enumerate_families(
    x: &Presheaf,
    support: &[usize],
    base: &Rc<BaseCat>,
    c: usize,
) -> Vec<Label> {
    // Collect the key slots in a fixed order.
    let mut slots: Vec<(usize, usize)> = Vec::new(); // (d, arrow d -> c)
    for &d in support {
        for h in base.hom(d, c) {
            slots.push((d, h));
        }
    }
    let mut out = Vec::new();
    let mut choice: Vec<usize> = vec![0; slots.len()];
    'outer: loop {
        // Materialize the family if every slot's component is nonempty.
        let mut entries = Vec::with_capacity(slots.len());
        let mut ok = true;
        for (s, &(d, h)) in slots.iter().enumerate() {
            let comp = x.at(d);
            if comp.is_empty() {
                ok = false;
                break;
            }
            entries.push((family_key(base, d, h), comp.elements()[choice[s]].clone()));
        }
        if ok || slots.is_empty() {
            let fam = Label::graph(entries);
            if family_is_natural(x, support, base, c, &fam) {
                out.push(fam);
            }
        }
        // advance the odometer
        let mut k = slots.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            let (d, _) = slots[k];
            let m = x.at(d).len();
            if m == 0 {
                break 'outer;
            }
            choice[k] += 1;
            if choice[k] < m {
                continue 'outer;
            }
            choice[k] = 0;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn family_is_natural(
    x: &Presheaf,
    support: &[usize],
    base: &Rc<BaseCat>,
    c: usize,
    fam: &Label,
) -> bool {
    // For every arrow e : d -> d' between supported objects and every
    // f : d' -> c, the entry at (d, f.e) must be the restriction of the
    // entry at (d', f).
    for (ei, e) in base.arrows().iter().enumerate() {
        if !support.contains(&e.src) || !support.contains(&e.tgt) {
            continue;
        }
        for f in base.hom(e.tgt, c) {
            let fe = base.compose_arrows(ei, f);
            let upper = family_lookup(fam, &family_key(base, e.tgt, f));
            let lower = family_lookup(fam, &family_key(base, e.src, fe));
            if x.restriction(ei).apply(&upper) != &lower {
                return false;
            }
        }
    }
    true
}

/// The action of `(-)^U` on a morphism: postcompose every family value.
pub fn exp_map(u: &Subterminal, m: &PresheafMor) -> PresheafMor {
    let src = exp_by_subterminal(m.dom(), u);
    let dst = exp_by_subterminal(m.cod(), u);
    let base = m.dom().base().clone();
    PresheafMor::from_fn(&src, &dst, |_, fam| match fam {
        Label::Graph(entries) => Label::graph(
            entries
                .iter()
                .map(|(k, v)| {
                    let d = match k {
                        Label::Pair(obj_name, _) => match &**obj_name {
                            Label::Atom(s) => base.object_index(s).expect("family key object"),
                            _ => unreachable!(),
                        },
                        _ => unreachable!(),
                    };
                    (k.clone(), m.component(d).apply(v).clone())
                })
                .collect(),
        ),
        _ => unreachable!("exponential elements are family graphs"),
    })
    .expect("postcomposed family is natural")
}

/// Evaluation `X^U x U -> X` on the chosen product.
pub fn exp_eval(x: &Presheaf, u: &Subterminal) -> PresheafMor {
    let expo = exp_by_subterminal(x, u);
    let (prod, _, _) = psh_product(&expo, u.presheaf());
    let base = x.base().clone();
    PresheafMor::from_fn(&prod, x, |c, l| match l {
        Label::Pair(fam, _) => family_lookup(fam, &family_key(&base, c, base.identity_of(c))),
        _ => unreachable!(),
    })
    .expect("evaluation is natural")
}

/// Transposes `m : A x U -> X` (on the chosen product) to `A -> X^U`.
pub fn exp_curry(
    a: &Presheaf,
    u: &Subterminal,
    x: &Presheaf,
    m: &PresheafMor,
) -> Result<PresheafMor, PresheafError> {
    let (prod, _, _) = psh_product(a, u.presheaf());
    if m.dom() != &prod || m.cod() != x {
        return Err(PresheafError::ShapeMismatch(
            "curry expects a map A x U -> X on the chosen product".into(),
        ));
    }
    let expo = exp_by_subterminal(x, u);
    let base = a.base().clone();
    let support = u.support();
    PresheafMor::from_fn(a, &expo, |c, el| {
        let mut entries = Vec::new();
        for &d in &support {
            let uu = u.presheaf().at(d).elements()[0].clone();
            for h in base.hom(d, c) {
                let moved = a.restriction(h).apply(el).clone();
                let val = m.component(d).apply(&Label::pair(moved, uu.clone())).clone();
                entries.push((family_key(&base, d, h), val));
            }
        }
        Label::graph(entries)
    })
}

// ---------------------------------------------------------------------------
// Enumeration and canonical forms
// ---------------------------------------------------------------------------

/// All presheaves over `base` with every component of size at most
/// `max_size`, using canonical element labels `"0", "1", ...`.
pub fn enumerate_presheaves(base: &Rc<BaseCat>, max_size: usize) -> Vec<Presheaf> {
    let nobj = base.object_count();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; nobj];
    loop {
        let at: Vec<FinSet> = sizes.iter().map(|&n| FinSet::range(n)).collect();
        // enumerate restriction choices for non-identity arrows
        let free: Vec<usize> = (0..base.arrows().len())
            .filter(|&i| !base.is_identity_arrow(i))
            .collect();
        let choices: Vec<Vec<FinFn>> = free
            .iter()
            .map(|&i| {
                let a = &base.arrows()[i];
                finset::all_maps(&at[a.tgt], &at[a.src])
            })
            .collect();
        if choices.iter().all(|c| !c.is_empty()) {
            let mut pick = vec![0usize; free.len()];
            'assign: loop {
                let mut restrict: Vec<Option<FinFn>> = vec![None; base.arrows().len()];
                for (k, &i) in free.iter().enumerate() {
                    restrict[i] = Some(choices[k][pick[k]].clone());
                }
                for i in 0..base.arrows().len() {
                    if base.is_identity_arrow(i) {
                        restrict[i] = Some(FinFn::identity(&at[base.arrows()[i].src]));
                    }
                }
                let restrict: Vec<FinFn> = restrict.into_iter().map(Option::unwrap).collect();
                if let Ok(p) = Presheaf::new(base.clone(), at.clone(), restrict) {
                    out.push(p);
                }
                let mut k = free.len();
                loop {
                    if k == 0 {
                        break 'assign;
                    }
                    k -= 1;
                    pick[k] += 1;
                    if pick[k] < choices[k].len() {
                        continue 'assign;
                    }
                    pick[k] = 0;
                }
            }
        }
        // advance sizes odometer
        let mut k = nobj;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= max_size {
                break;
            }
            sizes[k] = 0;
        }
    }
}

thread_local! {
    static HOM_CACHE: std::cell::RefCell<std::collections::BTreeMap<(Presheaf, Presheaf), Vec<PresheafMor>>> =
        std::cell::RefCell::new(std::collections::BTreeMap::new());
    static EXP_CACHE: std::cell::RefCell<std::collections::BTreeMap<(Presheaf, Presheaf), Presheaf>> =
        std::cell::RefCell::new(std::collections::BTreeMap::new());
}

/// All presheaf morphisms `a -> b`, in a fixed enumeration order. Memoized;
/// the tables are pure functions of their arguments.
pub fn psh_hom(a: &Presheaf, b: &Presheaf) -> Vec<PresheafMor> {
    let key = (a.clone(), b.clone());
    if let Some(hit) = HOM_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = psh_hom_uncached(a, b);
    HOM_CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

fn psh_hom_uncached(a: &Presheaf, b: &Presheaf) -> Vec<PresheafMor> {
    let base = a.base().clone();
    if b.base() != &base {
        return vec![];
    }
    let per_obj: Vec<Vec<FinFn>> = (0..base.object_count())
        .map(|c| finset::all_maps(a.at(c), b.at(c)))
        .collect();
    if per_obj.iter().any(|v| v.is_empty()) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; per_obj.len()];
    'outer: loop {
        let comps: Vec<FinFn> = pick.iter().enumerate().map(|(c, &i)| per_obj[c][i].clone()).collect();
        if let Ok(m) = PresheafMor::new(a.clone(), b.clone(), comps) {
            out.push(m);
        }
        let mut k = per_obj.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < per_obj[k].len() {
                continue 'outer;
            }
            pick[k] = 0;
        }
    }
    out
}

/// Relabels a presheaf onto canonical `"0", "1", ...` labels and returns the
/// witnessing isomorphism from the original.
pub fn canonicalize(p: &Presheaf) -> (Presheaf, PresheafMor) {
    let base = p.base().clone();
    let at: Vec<FinSet> = p.components().iter().map(|s| FinSet::range(s.len())).collect();
    let rename = |c: usize, l: &Label| -> Label {
        Label::atom(p.at(c).index_of(l).unwrap().to_string())
    };
    let restrict: Vec<FinFn> = (0..base.arrows().len())
        .map(|i| {
            let a = &base.arrows()[i];
            FinFn::from_fn(at[a.tgt].clone(), at[a.src].clone(), |l| {
                let idx: usize = match l {
                    Label::Atom(s) => s.parse().unwrap(),
                    _ => unreachable!(),
                };
                let orig = &p.at(a.tgt).elements()[idx];
                rename(a.src, p.restriction(i).apply(orig))
            })
            .unwrap()
        })
        .collect();
    let canon = Presheaf { base, at, restrict };
    let iso = PresheafMor::from_fn(p, &canon, rename).expect("canonical relabelling is natural");
    (canon, iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseCat;

    fn sier() -> Rc<BaseCat> {
        BaseCat::arrow_base("sier", "a", "b", "r")
    }

    #[test]
    fn terminal_has_unit_components() {
        let t = Presheaf::terminal(sier());
        assert!(t.components().iter().all(|s| s.len() == 1));
    }

    #[test]
    fn subterminal_counts() {
        assert_eq!(subterminal_enumerate(&BaseCat::point()).len(), 2);
        assert_eq!(subterminal_enumerate(&BaseCat::discrete("p2", &["l", "r"])).len(), 4);
        // On the arrow base, support at the target forces support at the source.
        assert_eq!(subterminal_enumerate(&sier()).len(), 3);
    }

    #[test]
    fn presheaf_enumeration_counts_on_arrow_base() {
        // Independent oracle: pairs (m, n) of component sizes <= 2 with a map
        // X(b) -> X(a), i.e. sum over m,n of m^n.
        let mut expected = 0usize;
        for m in 0..=2usize {
            for n in 0..=2usize {
                expected += m.pow(n as u32);
            }
        }
        let got = enumerate_presheaves(&sier(), 2).len();
        assert_eq!(got, expected);
        assert_eq!(got, 11);
    }

    #[test]
    fn product_and_pullback_are_pointwise() {
        let base = BaseCat::discrete("p2", &["l", "r"]);
        let ps = enumerate_presheaves(&base, 2);
        let a = ps.iter().find(|p| p.at(0).len() == 2 && p.at(1).len() == 1).unwrap();
        let b = ps.iter().find(|p| p.at(0).len() == 1 && p.at(1).len() == 2).unwrap();
        let (prod, p1, p2) = psh_product(a, b);
        assert_eq!(prod.at(0).len(), 2);
        assert_eq!(prod.at(1).len(), 2);
        assert_eq!(p1.cod(), a);
        assert_eq!(p2.cod(), b);
    }

    #[test]
    fn pushout_on_two_point_base() {
        // G <- G x U -> U with U = (1, 0) gives (1, G_r).
        let base = BaseCat::discrete("p2", &["l", "r"]);
        let u = Subterminal::from_pattern(base.clone(), &[true, false]).unwrap();
        let g = enumerate_presheaves(&base, 2)
            .into_iter()
            .find(|p| p.at(0).len() == 2 && p.at(1).len() == 2)
            .unwrap();
        let (gu, pg, pu) = {
            let (apex, p1, p2) = psh_product(&g, u.presheaf());
            (apex, p1, p2)
        };
        let _ = gu;
        let (apex, _, _) = psh_pushout(&pg, &pu);
        assert_eq!(apex.at(0).len(), 1);
        assert_eq!(apex.at(1).len(), 2);
    }

    #[test]
    fn exponential_on_two_point_base() {
        // X^U with U = (1, 0) is (X_l, 1).
        let base = BaseCat::discrete("p2", &["l", "r"]);
        let u = Subterminal::from_pattern(base.clone(), &[true, false]).unwrap();
        let x = enumerate_presheaves(&base, 3)
            .into_iter()
            .find(|p| p.at(0).len() == 3 && p.at(1).len() == 2)
            .unwrap();
        let e = exp_by_subterminal(&x, &u);
        assert_eq!(e.at(0).len(), 3);
        assert_eq!(e.at(1).len(), 1);
    }

    #[test]
    fn exponential_transpose_bijection_on_sierpinski() {
        // Maps A x U -> X correspond to maps A -> X^U.
        let base = sier();
        let all = enumerate_presheaves(&base, 2);
        let u = subterminal_enumerate(&base)
            .into_iter()
            .find(|s| s.supported_at(0) && !s.supported_at(1))
            .unwrap();
        for a in all.iter().take(6) {
            for x in all.iter().take(6) {
                let (prod, _, _) = psh_product(a, u.presheaf());
                let ups = psh_hom(&prod, x);
                let expo = exp_by_subterminal(x, &u);
                let flats = psh_hom(a, &expo);
                assert_eq!(ups.len(), flats.len(), "transpose count mismatch");
                for m in &ups {
                    let t = exp_curry(a, &u, x, m).unwrap();
                    assert!(flats.contains(&t));
                }
            }
        }
    }

    #[test]
    fn canonicalize_roundtrip() {
        let base = sier();
        for p in enumerate_presheaves(&base, 2) {
            let (canon, iso) = canonicalize(&p);
            assert!(iso.is_iso());
            assert_eq!(iso.dom(), &p);
            assert_eq!(iso.cod(), &canon);
            let (canon2, iso2) = canonicalize(&canon);
            assert_eq!(canon, canon2);
            assert!(iso2.is_identity());
        }
    }

    #[test]
    fn hom_enumeration_is_natural() {
        let base = sier();
        let all = enumerate_presheaves(&base, 2);
        for a in all.iter().take(5) {
            for b in all.iter().take(5) {
                for m in psh_hom(a, b) {
                    assert!(m.validate().is_ok());
                }
            }
        }
    }
}
