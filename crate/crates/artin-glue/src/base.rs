//! Finite base categories: the index shapes our presheaf toposes live over.

use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("composition table is not total: missing {0} after {1}")]
    MissingComposite(String, String),
    #[error("composition table violates a law: {0}")]
    LawViolation(String),
    #[error("arrow {0} has inconsistent endpoints")]
    BadArrow(String),
    #[error("base functor is not functorial: {0}")]
    NotFunctorial(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseArrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category presented by objects, arrows (including identities) and
/// a total composition table, validated exhaustively at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseCat {
    pub name: String,
    objects: Vec<String>,
    arrows: Vec<BaseArrow>,
    /// Identity arrow index per object.
    identities: Vec<usize>,
    /// `(f, g) -> g . f` for `tgt(f) = src(g)`, keyed by arrow indices.
    comp: BTreeMap<(usize, usize), usize>,
}

impl BaseCat {
    /// A base with the given objects, non-identity arrows and composites.
    /// Identity arrows named `id_<obj>` are added automatically.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<BaseArrow>,
        composites: Vec<(String, String, String)>,
    ) -> Result<Rc<BaseCat>, BaseError> {
        let name = name.into();
        let mut all_arrows = Vec::new();
        let mut identities = Vec::new();
        for (i, o) in objects.iter().enumerate() {
            identities.push(all_arrows.len());
            all_arrows.push(BaseArrow { name: format!("id_{o}"), src: i, tgt: i });
        }
        for a in &arrows {
            if a.src >= objects.len() || a.tgt >= objects.len() {
                return Err(BaseError::BadArrow(a.name.clone()));
            }
            all_arrows.push(a.clone());
        }
        let arrow_index = |n: &str| -> Option<usize> {
            all_arrows.iter().position(|a| a.name == n)
        };
        let mut comp = BTreeMap::new();
        // identity composites
        for (i, a) in all_arrows.iter().enumerate() {
            comp.insert((identities[a.src], i), i);
            comp.insert((i, identities[a.tgt]), i);
        }
        for (f, g, h) in &composites {
            let fi = arrow_index(f).ok_or_else(|| BaseError::BadArrow(f.clone()))?;
            let gi = arrow_index(g).ok_or_else(|| BaseError::BadArrow(g.clone()))?;
            let hi = arrow_index(h).ok_or_else(|| BaseError::BadArrow(h.clone()))?;
            if all_arrows[fi].tgt != all_arrows[gi].src {
                return Err(BaseError::LawViolation(format!("{g} after {f} is not composable")));
            }
            if all_arrows[hi].src != all_arrows[fi].src || all_arrows[hi].tgt != all_arrows[gi].tgt
            {
                return Err(BaseError::LawViolation(format!(
                    "{h} has the wrong endpoints for {g} after {f}"
                )));
            }
            comp.insert((fi, gi), hi);
        }
        let cat = BaseCat { name, objects, arrows: all_arrows, identities, comp };
        cat.validate()?;
        Ok(Rc::new(cat))
    }

    /// A base with only identity arrows.
    pub fn discrete(name: impl Into<String>, objects: &[&str]) -> Rc<BaseCat> {
        BaseCat::new(
            name,
            objects.iter().map(|s| s.to_string()).collect(),
            vec![],
            vec![],
        )
        .expect("discrete bases are always lawful")
    }

    /// The one-object, one-arrow base; presheaves over it are plain finite sets.
    pub fn point() -> Rc<BaseCat> {
        BaseCat::discrete("pt", &["pt"])
    }

    /// Two objects and a single arrow between them.
    pub fn arrow_base(name: impl Into<String>, src: &str, tgt: &str, arrow: &str) -> Rc<BaseCat> {
        BaseCat::new(
            name,
            vec![src.to_string(), tgt.to_string()],
            vec![BaseArrow { name: arrow.to_string(), src: 0, tgt: 1 }],
            vec![],
        )
        .expect("an arrow base is always lawful")
    }

    fn validate(&self) -> Result<(), BaseError> {
        for (fi, f) in self.arrows.iter().enumerate() {
            for (gi, g) in self.arrows.iter().enumerate() {
                if f.tgt == g.src && !self.comp.contains_key(&(fi, gi)) {
                    return Err(BaseError::MissingComposite(g.name.clone(), f.name.clone()));
                }
            }
        }
        for (&(fi, gi), &hi) in &self.comp {
            let (f, g, h) = (&self.arrows[fi], &self.arrows[gi], &self.arrows[hi]);
            if h.src != f.src || h.tgt != g.tgt {
                return Err(BaseError::LawViolation(format!(
                    "composite {} of {} then {} has wrong endpoints",
                    h.name, f.name, g.name
                )));
            }
        }
        // unit laws
        for (i, a) in self.arrows.iter().enumerate() {
            if self.comp[&(self.identities[a.src], i)] != i
                || self.comp[&(i, self.identities[a.tgt])] != i
            {
                return Err(BaseError::LawViolation(format!("identity law fails at {}", a.name)));
            }
        }
        // associativity, exhaustively
        for fi in 0..self.arrows.len() {
            for gi in 0..self.arrows.len() {
                if self.arrows[fi].tgt != self.arrows[gi].src {
                    continue;
                }
                for hi in 0..self.arrows.len() {
                    if self.arrows[gi].tgt != self.arrows[hi].src {
                        continue;
                    }
                    let gf = self.comp[&(fi, gi)];
                    let hg = self.comp[&(gi, hi)];
                    if self.comp[&(gf, hi)] != self.comp[&(fi, hg)] {
                        return Err(BaseError::LawViolation(format!(
                            "associativity fails on ({}, {}, {})",
                            self.arrows[fi].name, self.arrows[gi].name, self.arrows[hi].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrows(&self) -> &[BaseArrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn identity_of(&self, obj: usize) -> usize {
        self.identities[obj]
    }

    pub fn is_identity_arrow(&self, i: usize) -> bool {
        self.identities.contains(&i)
    }

    /// `g . f` by arrow index; panics on non-composable pairs.
    pub fn compose_arrows(&self, f: usize, g: usize) -> usize {
        self.comp[&(f, g)]
    }

    /// Arrow indices from `a` to `b`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&i| self.arrows[i].src == a && self.arrows[i].tgt == b)
            .collect()
    }
}

/// A functor between finite base categories, given by tables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseFunctor {
    pub name: String,
    pub src: Rc<BaseCat>,
    pub dst: Rc<BaseCat>,
    pub obj_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl BaseFunctor {
    pub fn new(
        name: impl Into<String>,
        src: Rc<BaseCat>,
        dst: Rc<BaseCat>,
        obj_map: Vec<usize>,
        arrow_map: Vec<usize>,
    ) -> Result<Rc<BaseFunctor>, BaseError> {
        let f = BaseFunctor { name: name.into(), src, dst, obj_map, arrow_map };
        for (i, a) in f.src.arrows().iter().enumerate() {
            let img = &f.dst.arrows()[f.arrow_map[i]];
            if img.src != f.obj_map[a.src] || img.tgt != f.obj_map[a.tgt] {
                return Err(BaseError::NotFunctorial(format!(
                    "arrow {} maps outside its boundary image",
                    a.name
                )));
            }
        }
        for (i, _) in f.src.objects().iter().enumerate() {
            if f.arrow_map[f.src.identity_of(i)] != f.dst.identity_of(f.obj_map[i]) {
                return Err(BaseError::NotFunctorial(format!(
                    "identity of {} is not preserved",
                    f.src.objects()[i]
                )));
            }
        }
        for (fi, fa) in f.src.arrows().iter().enumerate() {
            for (gi, ga) in f.src.arrows().iter().enumerate() {
                if fa.tgt != ga.src {
                    continue;
                }
                let lhs = f.arrow_map[f.src.compose_arrows(fi, gi)];
                let rhs = f.dst.compose_arrows(f.arrow_map[fi], f.arrow_map[gi]);
                if lhs != rhs {
                    return Err(BaseError::NotFunctorial(format!(
                        "composition of {} then {} is not preserved",
                        fa.name, ga.name
                    )));
                }
            }
        }
        Ok(Rc::new(f))
    }

    /// Collapses every object of `src` to the single object of the point base.
    pub fn collapse_to_point(name: impl Into<String>, src: Rc<BaseCat>) -> Rc<BaseFunctor> {
        let dst = BaseCat::point();
        let obj_map = vec![0; src.object_count()];
        let arrow_map = vec![0; src.arrows().len()];
        BaseFunctor::new(name, src, dst, obj_map, arrow_map)
            .expect("collapsing is always functorial")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_and_arrow_bases_validate() {
        let p2 = BaseCat::discrete("p2", &["l", "r"]);
        assert_eq!(p2.object_count(), 2);
        assert_eq!(p2.arrows().len(), 2);
        let s = BaseCat::arrow_base("sier", "a", "b", "r");
        assert_eq!(s.arrows().len(), 3);
        assert_eq!(s.hom(0, 1).len(), 1);
        assert_eq!(s.hom(1, 0).len(), 0);
    }

    #[test]
    fn missing_composite_is_rejected() {
        // two composable non-identity arrows with no composite entry
        let err = BaseCat::new(
            "chain",
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                BaseArrow { name: "f".into(), src: 0, tgt: 1 },
                BaseArrow { name: "g".into(), src: 1, tgt: 2 },
            ],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, BaseError::MissingComposite(..)));
    }

    #[test]
    fn chain_with_composite_validates() {
        let c = BaseCat::new(
            "chain",
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                BaseArrow { name: "f".into(), src: 0, tgt: 1 },
                BaseArrow { name: "g".into(), src: 1, tgt: 2 },
                BaseArrow { name: "gf".into(), src: 0, tgt: 2 },
            ],
            vec![("f".into(), "g".into(), "gf".into())],
        )
        .unwrap();
        assert_eq!(c.hom(0, 2).len(), 1);
    }

    #[test]
    fn collapse_functor_is_functorial() {
        let s = BaseCat::arrow_base("sier", "a", "b", "r");
        let c = BaseFunctor::collapse_to_point("c", s);
        assert_eq!(c.obj_map, vec![0, 0]);
    }
}
