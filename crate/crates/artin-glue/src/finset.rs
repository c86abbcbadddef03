//! Finite sets and total functions, with all finite limits, finite colimits
//! and exponentials computed exactly.
//!
//! Everything downstream of this module reduces to the constructions here.
//! Apex elements carry canonical labels: pullback and product elements are
//! pairs, coproduct elements are tagged, quotient classes are named by their
//! least member, exponential elements are function graphs.

use crate::label::Label;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinSetError {
    #[error("domain mismatch: codomain of the first map is not the domain of the second")]
    DomainMismatch,
    #[error("diagram shape does not match the requested (co)limit kind: {0}")]
    ShapeMismatch(String),
    #[error("the given legs do not form a cone over the diagram: {0}")]
    NonCone(String),
    #[error("the given legs do not form a cocone under the diagram: {0}")]
    NonCocone(String),
    #[error("function table is not total or maps outside its codomain: {0}")]
    BadTable(String),
}

/// A finite set: a sorted sequence of distinct labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FinSet {
    elements: Vec<Label>,
}

impl FinSet {
    /// Builds a set from labels; sorts them and rejects duplicates.
    pub fn new(mut elements: Vec<Label>) -> Self {
        elements.sort();
        for w in elements.windows(2) {
            assert!(w[0] != w[1], "duplicate label {} in finite set", w[0]);
        }
        FinSet { elements }
    }

    pub fn empty() -> Self {
        FinSet { elements: vec![] }
    }

    /// The chosen one-point set `{*}`.
    pub fn unit() -> Self {
        FinSet { elements: vec![Label::Unit] }
    }

    /// A set of named atoms.
    pub fn atoms<S: AsRef<str>>(names: &[S]) -> Self {
        FinSet::new(names.iter().map(|n| Label::atom(n.as_ref())).collect())
    }

    /// The canonical n-element set `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        FinSet::new((0..n).map(|i| Label::atom(i.to_string())).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.elements.binary_search(l).is_ok()
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.elements.binary_search(l).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Label> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }
}

/// A total function between finite sets, given by its table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    /// Image of `dom.elements()[i]`.
    table: Vec<Label>,
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, pairs: &[(Label, Label)]) -> Result<Self, FinSetError> {
        let mut table = vec![None; dom.len()];
        for (k, v) in pairs {
            let i = dom
                .index_of(k)
                .ok_or_else(|| FinSetError::BadTable(format!("{k} is not in the domain")))?;
            if !cod.contains(v) {
                return Err(FinSetError::BadTable(format!("{v} is not in the codomain")));
            }
            table[i] = Some(v.clone());
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    FinSetError::BadTable(format!("no image for {}", dom.elements()[i]))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinFn { dom, cod, table })
    }

    pub fn from_fn(
        dom: FinSet,
        cod: FinSet,
        f: impl Fn(&Label) -> Label,
    ) -> Result<Self, FinSetError> {
        let table: Vec<Label> = dom.iter().map(&f).collect();
        for v in &table {
            if !cod.contains(v) {
                return Err(FinSetError::BadTable(format!("{v} is not in the codomain")));
            }
        }
        Ok(FinFn { dom, cod, table })
    }

    pub fn identity(s: &FinSet) -> Self {
        FinFn { dom: s.clone(), cod: s.clone(), table: s.elements().to_vec() }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: &Label) -> Result<Self, FinSetError> {
        FinFn::from_fn(dom.clone(), cod.clone(), |_| value.clone())
    }

    /// The unique map into the one-point set.
    pub fn bang(dom: &FinSet) -> Self {
        FinFn {
            dom: dom.clone(),
            cod: FinSet::unit(),
            table: vec![Label::Unit; dom.len()],
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, l: &Label) -> &Label {
        let i = self.dom.index_of(l).unwrap_or_else(|| panic!("{l} is not in the domain"));
        &self.table[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table == self.dom.elements()
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut seen = self.table.clone();
        seen.sort();
        seen == self.cod.elements()
    }

    pub fn inverse(&self) -> Option<FinFn> {
        if !self.is_bijective() {
            return None;
        }
        let mut pairs: Vec<(Label, Label)> = self
            .dom
            .iter()
            .zip(self.table.iter())
            .map(|(k, v)| (v.clone(), k.clone()))
            .collect();
        pairs.sort();
        let table = pairs.into_iter().map(|(_, v)| v).collect();
        Some(FinFn { dom: self.cod.clone(), cod: self.dom.clone(), table })
    }
}

/// Pointwise composition `g . f`. Fails unless `f.cod = g.dom`.
pub fn compose(g: &FinFn, f: &FinFn) -> Result<FinFn, FinSetError> {
    if f.cod != g.dom {
        return Err(FinSetError::DomainMismatch);
    }
    let table = f.table.iter().map(|v| g.apply(v).clone()).collect();
    Ok(FinFn { dom: f.dom.clone(), cod: g.cod.clone(), table })
}

/// Enumerates every total function `dom -> cod` in a fixed order.
pub fn all_maps(dom: &FinSet, cod: &FinSet) -> Vec<FinFn> {
    let n = dom.len();
    if n == 0 {
        return vec![FinFn { dom: dom.clone(), cod: cod.clone(), table: vec![] }];
    }
    if cod.is_empty() {
        return vec![];
    }
    let m = cod.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let table: Vec<Label> = idx.iter().map(|&i| cod.elements()[i].clone()).collect();
        out.push(FinFn { dom: dom.clone(), cod: cod.clone(), table });
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Limits
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitDiagram {
    Terminal,
    Product(FinSet, FinSet),
    /// Parallel pair `f, g : A -> B`.
    Equalizer(FinFn, FinFn),
    /// Cospan `f : A -> C`, `g : B -> C`.
    Pullback(FinFn, FinFn),
}

/// A chosen limit: apex, projection legs, and enough of the diagram to
/// mediate arbitrary cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCone {
    pub diagram: LimitDiagram,
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

impl LimitCone {
    /// The unique factorisation of a cone through the apex.
    pub fn mediate(&self, cone: &[FinFn]) -> Result<FinFn, FinSetError> {
        match &self.diagram {
            LimitDiagram::Terminal => {
                if !cone.is_empty() {
                    return Err(FinSetError::NonCone("terminal cone has no legs".into()));
                }
                Ok(FinFn::bang(&FinSet::empty()))
            }
            LimitDiagram::Product(a, b) => {
                let [p, q] = two_legs(cone)?;
                if p.cod() != a || q.cod() != b || p.dom() != q.dom() {
                    return Err(FinSetError::NonCone("legs do not match the product".into()));
                }
                FinFn::from_fn(p.dom().clone(), self.apex.clone(), |x| {
                    Label::pair(p.apply(x).clone(), q.apply(x).clone())
                })
            }
            LimitDiagram::Equalizer(f, g) => {
                let [p] = one_leg(cone)?;
                if p.cod() != f.dom() {
                    return Err(FinSetError::NonCone("leg does not land in the source".into()));
                }
                for x in p.dom().iter() {
                    let v = p.apply(x);
                    if f.apply(v) != g.apply(v) {
                        return Err(FinSetError::NonCone(format!(
                            "leg does not equalize the pair at {x}"
                        )));
                    }
                }
                FinFn::from_fn(p.dom().clone(), self.apex.clone(), |x| p.apply(x).clone())
            }
            LimitDiagram::Pullback(f, g) => {
                let [p, q] = two_legs(cone)?;
                if p.cod() != f.dom() || q.cod() != g.dom() || p.dom() != q.dom() {
                    return Err(FinSetError::NonCone("legs do not match the cospan".into()));
                }
                for x in p.dom().iter() {
                    if f.apply(p.apply(x)) != g.apply(q.apply(x)) {
                        return Err(FinSetError::NonCone(format!(
                            "square does not commute at {x}"
                        )));
                    }
                }
                FinFn::from_fn(p.dom().clone(), self.apex.clone(), |x| {
                    Label::pair(p.apply(x).clone(), q.apply(x).clone())
                })
            }
        }
    }
}

pub fn limit(diagram: LimitDiagram) -> LimitCone {
    match diagram {
        LimitDiagram::Terminal => LimitCone {
            diagram: LimitDiagram::Terminal,
            apex: FinSet::unit(),
            legs: vec![],
        },
        LimitDiagram::Product(a, b) => {
            let mut elems = Vec::new();
            for x in a.iter() {
                for y in b.iter() {
                    elems.push(Label::pair(x.clone(), y.clone()));
                }
            }
            let apex = FinSet::new(elems);
            let p1 = project_pair(&apex, &a, true);
            let p2 = project_pair(&apex, &b, false);
            LimitCone { diagram: LimitDiagram::Product(a, b), apex, legs: vec![p1, p2] }
        }
        LimitDiagram::Equalizer(f, g) => {
            assert_eq!(f.dom(), g.dom(), "equalizer needs a parallel pair");
            assert_eq!(f.cod(), g.cod(), "equalizer needs a parallel pair");
            let elems: Vec<Label> =
                f.dom().iter().filter(|x| f.apply(x) == g.apply(x)).cloned().collect();
            let apex = FinSet::new(elems);
            let incl = FinFn::from_fn(apex.clone(), f.dom().clone(), |x| x.clone()).unwrap();
            LimitCone { diagram: LimitDiagram::Equalizer(f, g), apex, legs: vec![incl] }
        }
        LimitDiagram::Pullback(f, g) => {
            assert_eq!(f.cod(), g.cod(), "pullback needs a cospan");
            let mut elems = Vec::new();
            for x in f.dom().iter() {
                for y in g.dom().iter() {
                    if f.apply(x) == g.apply(y) {
                        elems.push(Label::pair(x.clone(), y.clone()));
                    }
                }
            }
            let apex = FinSet::new(elems);
            let p1 = project_pair(&apex, f.dom(), true);
            let p2 = project_pair(&apex, g.dom(), false);
            LimitCone { diagram: LimitDiagram::Pullback(f, g), apex, legs: vec![p1, p2] }
        }
    }
}

fn project_pair(apex: &FinSet, cod: &FinSet, first: bool) -> FinFn {
    FinFn::from_fn(apex.clone(), cod.clone(), |l| match l {
        Label::Pair(a, b) => {
            if first {
                (**a).clone()
            } else {
                (**b).clone()
            }
        }
        _ => unreachable!("apex elements are pairs"),
    })
    .unwrap()
}

fn two_legs(cone: &[FinFn]) -> Result<[&FinFn; 2], FinSetError> {
    match cone {
        [p, q] => Ok([p, q]),
        _ => Err(FinSetError::NonCone(format!("expected 2 legs, got {}", cone.len()))),
    }
}

fn one_leg(cone: &[FinFn]) -> Result<[&FinFn; 1], FinSetError> {
    match cone {
        [p] => Ok([p]),
        _ => Err(FinSetError::NonCone(format!("expected 1 leg, got {}", cone.len()))),
    }
}

// ---------------------------------------------------------------------------
// Colimits
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColimitDiagram {
    Initial,
    Coproduct(FinSet, FinSet),
    /// Parallel pair `f, g : A -> B`.
    Coequalizer(FinFn, FinFn),
    /// Span `f : A -> B`, `g : A -> C`.
    Pushout(FinFn, FinFn),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitCocone {
    pub diagram: ColimitDiagram,
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

impl ColimitCocone {
    /// The unique factorisation of a cocone through the apex.
    pub fn comediate(&self, cocone: &[FinFn]) -> Result<FinFn, FinSetError> {
        match &self.diagram {
            ColimitDiagram::Initial => {
                if cocone.len() != 1 {
                    return Err(FinSetError::NonCocone("expected one target object".into()));
                }
                FinFn::from_fn(FinSet::empty(), cocone[0].cod().clone(), |_| unreachable!())
            }
            ColimitDiagram::Coproduct(a, b) => {
                let [p, q] = two_legs(cocone).map_err(recone)?;
                if p.dom() != a || q.dom() != b || p.cod() != q.cod() {
                    return Err(FinSetError::NonCocone("legs do not match the coproduct".into()));
                }
                FinFn::from_fn(self.apex.clone(), p.cod().clone(), |l| match l {
                    Label::Left(x) => p.apply(x).clone(),
                    Label::Right(x) => q.apply(x).clone(),
                    _ => unreachable!(),
                })
            }
            ColimitDiagram::Coequalizer(f, g) => {
                let [p] = one_leg(cocone).map_err(recone)?;
                if p.dom() != f.cod() {
                    return Err(FinSetError::NonCocone("leg does not start at the target".into()));
                }
                for x in f.dom().iter() {
                    if p.apply(f.apply(x)) != p.apply(g.apply(x)) {
                        return Err(FinSetError::NonCocone(format!(
                            "leg does not coequalize the pair at {x}"
                        )));
                    }
                }
                // A class maps to the image of any member; the inclusion leg
                // sends members to their representative.
                FinFn::from_fn(self.apex.clone(), p.cod().clone(), |rep| p.apply(rep).clone())
            }
            ColimitDiagram::Pushout(f, g) => {
                let [p, q] = two_legs(cocone).map_err(recone)?;
                if p.dom() != f.cod() || q.dom() != g.cod() || p.cod() != q.cod() {
                    return Err(FinSetError::NonCocone("legs do not match the span".into()));
                }
                for x in f.dom().iter() {
                    if p.apply(f.apply(x)) != q.apply(g.apply(x)) {
                        return Err(FinSetError::NonCocone(format!(
                            "square does not commute at {x}"
                        )));
                    }
                }
                FinFn::from_fn(self.apex.clone(), p.cod().clone(), |rep| match rep {
                    Label::Left(x) => p.apply(x).clone(),
                    Label::Right(x) => q.apply(x).clone(),
                    _ => unreachable!(),
                })
            }
        }
    }
}

fn recone(e: FinSetError) -> FinSetError {
    match e {
        FinSetError::NonCone(s) => FinSetError::NonCocone(s),
        other => other,
    }
}

/// Union-find over label indices with least-label representatives.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Quotients `carrier` by the relation generated by the given pairs. Each
/// class is named by its least member, so the result is canonical.
fn quotient(carrier: &FinSet, related: &[(Label, Label)]) -> (FinSet, FinFn) {
    let mut uf = UnionFind::new(carrier.len());
    for (a, b) in related {
        let i = carrier.index_of(a).expect("relation endpoint in carrier");
        let j = carrier.index_of(b).expect("relation endpoint in carrier");
        uf.union(i, j);
    }
    let roots: Vec<usize> = (0..carrier.len()).map(|i| uf.find(i)).collect();
    // Elements are sorted, so the first member of a class is its least.
    let mut least: Vec<Option<usize>> = vec![None; carrier.len()];
    for (i, &r) in roots.iter().enumerate() {
        if least[r].is_none() {
            least[r] = Some(i);
        }
    }
    let rep_label = |i: usize| carrier.elements()[least[roots[i]].unwrap()].clone();
    let mut reps = std::collections::BTreeSet::new();
    for i in 0..carrier.len() {
        reps.insert(rep_label(i));
    }
    let apex = FinSet::new(reps.into_iter().collect());
    let proj = FinFn::from_fn(carrier.clone(), apex.clone(), |l| {
        rep_label(carrier.index_of(l).unwrap())
    })
    .unwrap();
    (apex, proj)
}

pub fn colimit(diagram: ColimitDiagram) -> ColimitCocone {
    match diagram {
        ColimitDiagram::Initial => ColimitCocone {
            diagram: ColimitDiagram::Initial,
            apex: FinSet::empty(),
            legs: vec![],
        },
        ColimitDiagram::Coproduct(a, b) => {
            let mut elems: Vec<Label> = a.iter().map(|x| Label::left(x.clone())).collect();
            elems.extend(b.iter().map(|x| Label::right(x.clone())));
            let apex = FinSet::new(elems);
            let inl = FinFn::from_fn(a.clone(), apex.clone(), |x| Label::left(x.clone())).unwrap();
            let inr = FinFn::from_fn(b.clone(), apex.clone(), |x| Label::right(x.clone())).unwrap();
            ColimitCocone { diagram: ColimitDiagram::Coproduct(a, b), apex, legs: vec![inl, inr] }
        }
        ColimitDiagram::Coequalizer(f, g) => {
            assert_eq!(f.dom(), g.dom(), "coequalizer needs a parallel pair");
            assert_eq!(f.cod(), g.cod(), "coequalizer needs a parallel pair");
            let related: Vec<(Label, Label)> = f
                .dom()
                .iter()
                .map(|x| (f.apply(x).clone(), g.apply(x).clone()))
                .collect();
            let (apex, proj) = quotient(f.cod(), &related);
            ColimitCocone { diagram: ColimitDiagram::Coequalizer(f, g), apex, legs: vec![proj] }
        }
        ColimitDiagram::Pushout(f, g) => {
            assert_eq!(f.dom(), g.dom(), "pushout needs a span");
            let sum = colimit(ColimitDiagram::Coproduct(f.cod().clone(), g.cod().clone()));
            let related: Vec<(Label, Label)> = f
                .dom()
                .iter()
                .map(|x| (Label::left(f.apply(x).clone()), Label::right(g.apply(x).clone())))
                .collect();
            let (apex, proj) = quotient(&sum.apex, &related);
            let inl = compose(&proj, &sum.legs[0]).unwrap();
            let inr = compose(&proj, &sum.legs[1]).unwrap();
            ColimitCocone { diagram: ColimitDiagram::Pushout(f, g), apex, legs: vec![inl, inr] }
        }
    }
}

// ---------------------------------------------------------------------------
// Exponentials
// ---------------------------------------------------------------------------

/// The exponential `G^U` together with its evaluation map `G^U x U -> G`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub base: FinSet,
    pub exponent: FinSet,
    pub object: FinSet,
    /// The chosen product `object x exponent`.
    pub product: LimitCone,
    pub eval: FinFn,
}

/// All total functions `U -> G` with evaluation; `curry` inverts it.
pub fn exponential(g: &FinSet, u: &FinSet) -> Exponential {
    let elems: Vec<Label> = all_maps(u, g)
        .into_iter()
        .map(|f| {
            Label::graph(u.iter().map(|x| (x.clone(), f.apply(x).clone())).collect())
        })
        .collect();
    let object = FinSet::new(elems);
    let product = limit(LimitDiagram::Product(object.clone(), u.clone()));
    let eval = FinFn::from_fn(product.apex.clone(), g.clone(), |l| match l {
        Label::Pair(graph, x) => lookup_graph(graph, x),
        _ => unreachable!(),
    })
    .unwrap();
    Exponential { base: g.clone(), exponent: u.clone(), object, product, eval }
}

fn lookup_graph(graph: &Label, x: &Label) -> Label {
    match graph {
        Label::Graph(entries) => entries
            .iter()
            .find(|(k, _)| k == x)
            .map(|(_, v)| v.clone())
            .expect("graph is total"),
        _ => unreachable!("exponential elements are graphs"),
    }
}

impl Exponential {
    /// Transposes `m : A x U -> G` to `A -> G^U`, where `A x U` is the chosen
    /// product of `a` with the exponent.
    pub fn curry(&self, a: &FinSet, m: &FinFn) -> Result<FinFn, FinSetError> {
        let prod = limit(LimitDiagram::Product(a.clone(), self.exponent.clone()));
        if m.dom() != &prod.apex || m.cod() != &self.base {
            return Err(FinSetError::ShapeMismatch(
                "curry expects a map A x U -> G on chosen products".into(),
            ));
        }
        FinFn::from_fn(a.clone(), self.object.clone(), |x| {
            Label::graph(
                self.exponent
                    .iter()
                    .map(|u| (u.clone(), m.apply(&Label::pair(x.clone(), u.clone())).clone()))
                    .collect(),
            )
        })
    }

    /// Transposes `t : A -> G^U` back to `A x U -> G`.
    pub fn uncurry(&self, a: &FinSet, t: &FinFn) -> Result<FinFn, FinSetError> {
        if t.dom() != a || t.cod() != &self.object {
            return Err(FinSetError::ShapeMismatch("uncurry expects A -> G^U".into()));
        }
        let prod = limit(LimitDiagram::Product(a.clone(), self.exponent.clone()));
        FinFn::from_fn(prod.apex.clone(), self.base.clone(), |l| match l {
            Label::Pair(x, u) => lookup_graph(t.apply(x), u),
            _ => unreachable!(),
        })
    }
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

/// A commutation constraint on a candidate bijection `phi : A -> B`.
#[derive(Clone, Debug)]
pub enum IsoConstraint {
    /// Maps out of the pair: require `from_b . phi = from_a`.
    Out { from_a: FinFn, from_b: FinFn },
    /// Maps into the pair: require `phi . into_a = into_b`.
    In { into_a: FinFn, into_b: FinFn },
}

/// Searches for a bijection `A -> B` commuting with the given structure maps.
/// The search is a deterministic backtracking walk in label order, so the
/// first witness found is canonical. Absence is a value, not an error.
pub fn iso_search(a: &FinSet, b: &FinSet, constraints: &[IsoConstraint]) -> Option<FinFn> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];

    fn consistent(
        a: &FinSet,
        b: &FinSet,
        assign: &[Option<usize>],
        constraints: &[IsoConstraint],
    ) -> bool {
        for c in constraints {
            match c {
                IsoConstraint::Out { from_a, from_b } => {
                    for (i, img) in assign.iter().enumerate() {
                        if let Some(j) = img {
                            let x = &a.elements()[i];
                            let y = &b.elements()[*j];
                            if from_b.apply(y) != from_a.apply(x) {
                                return false;
                            }
                        }
                    }
                }
                IsoConstraint::In { into_a, into_b } => {
                    for z in into_a.dom().iter() {
                        let x = into_a.apply(z);
                        let i = a.index_of(x).unwrap();
                        if let Some(j) = assign[i] {
                            if &b.elements()[j] != into_b.apply(z) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn go(
        a: &FinSet,
        b: &FinSet,
        constraints: &[IsoConstraint],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        i: usize,
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            assign[i] = Some(j);
            used[j] = true;
            if consistent(a, b, assign, constraints)
                && go(a, b, constraints, assign, used, i + 1)
            {
                return true;
            }
            assign[i] = None;
            used[j] = false;
        }
        false
    }

    if !go(a, b, constraints, &mut assign, &mut used, 0) {
        return None;
    }
    let table: Vec<Label> =
        assign.into_iter().map(|j| b.elements()[j.unwrap()].clone()).collect();
    Some(FinFn { dom: a.clone(), cod: b.clone(), table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSet {
        FinSet::atoms(names)
    }

    #[test]
    fn compose_identity_laws() {
        let a = set(&["0", "1"]);
        let b = set(&["a"]);
        let f = FinFn::constant(&a, &b, &Label::atom("a")).unwrap();
        assert_eq!(compose(&FinFn::identity(&b), &f).unwrap(), f);
        assert_eq!(compose(&f, &FinFn::identity(&a)).unwrap(), f);
    }

    #[test]
    fn compose_pointwise_table() {
        let a = set(&["0", "1"]);
        let b = set(&["a"]);
        let c = set(&["x", "y"]);
        let f = FinFn::constant(&a, &b, &Label::atom("a")).unwrap();
        let g = FinFn::new(b.clone(), c.clone(), &[(Label::atom("a"), Label::atom("x"))]).unwrap();
        let gf = compose(&g, &f).unwrap();
        let expected = FinFn::constant(&a, &c, &Label::atom("x")).unwrap();
        assert_eq!(gf, expected);
    }

    #[test]
    fn compose_domain_mismatch() {
        let a = set(&["0"]);
        let b = set(&["a"]);
        let f = FinFn::constant(&a, &b, &Label::atom("a")).unwrap();
        assert_eq!(compose(&f, &f), Err(FinSetError::DomainMismatch));
    }

    #[test]
    fn compose_associative_exhaustively() {
        // Every composable triple between sets of size <= 3 over a fixed chain.
        for na in 0..=3 {
            for nb in 0..=3 {
                for nc in 0..=3 {
                    for nd in 0..=2 {
                        let (a, b, c, d) =
                            (FinSet::range(na), FinSet::range(nb), FinSet::range(nc), FinSet::range(nd));
                        for f in all_maps(&a, &b) {
                            for g in all_maps(&b, &c) {
                                for h in all_maps(&c, &d) {
                                    let left =
                                        compose(&compose(&h, &g).unwrap(), &f).unwrap();
                                    let right =
                                        compose(&h, &compose(&g, &f).unwrap()).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let c = set(&["c0", "c1", "c2"]);
        let id = FinFn::identity(&c);
        let pb = limit(LimitDiagram::Pullback(id.clone(), id));
        assert_eq!(pb.apex.len(), c.len());
        for l in pb.apex.iter() {
            match l {
                Label::Pair(x, y) => assert_eq!(x, y),
                _ => panic!("pullback labels are pairs"),
            }
        }
    }

    /// Independent counting oracle: matching pairs per fibre.
    fn pullback_size_oracle(f: &FinFn, g: &FinFn) -> usize {
        f.cod()
            .iter()
            .map(|c| {
                let nf = f.dom().iter().filter(|x| f.apply(x) == c).count();
                let ng = g.dom().iter().filter(|y| g.apply(y) == c).count();
                nf * ng
            })
            .sum()
    }

    #[test]
    fn pullback_size_matches_fibre_oracle() {
        let a = set(&["a0", "a1"]);
        let b = set(&["b0", "b1", "b2"]);
        let c = set(&["c0", "c1"]);
        let f = FinFn::new(
            a.clone(),
            c.clone(),
            &[
                (Label::atom("a0"), Label::atom("c0")),
                (Label::atom("a1"), Label::atom("c1")),
            ],
        )
        .unwrap();
        let g = FinFn::new(
            b.clone(),
            c.clone(),
            &[
                (Label::atom("b0"), Label::atom("c0")),
                (Label::atom("b1"), Label::atom("c0")),
                (Label::atom("b2"), Label::atom("c1")),
            ],
        )
        .unwrap();
        assert_eq!(pullback_size_oracle(&f, &g), 3);
        let pb = limit(LimitDiagram::Pullback(f, g));
        assert_eq!(pb.apex.len(), 3);
    }

    #[test]
    fn product_of_sizes_two_and_three() {
        let p = limit(LimitDiagram::Product(FinSet::range(2), FinSet::range(3)));
        assert_eq!(p.apex.len(), 6);
    }

    #[test]
    fn limit_mediators_are_unique_against_enumerated_cones() {
        // For every cone with apex of size <= 2 over a small cospan, the
        // mediator is the only map commuting with the legs.
        let a = set(&["a0", "a1"]);
        let c = set(&["c0"]);
        let f = FinFn::constant(&a, &c, &Label::atom("c0")).unwrap();
        let g = FinFn::constant(&a, &c, &Label::atom("c0")).unwrap();
        let pb = limit(LimitDiagram::Pullback(f.clone(), g.clone()));
        for n in 0..=2 {
            let x = FinSet::range(n);
            for p in all_maps(&x, &a) {
                for q in all_maps(&x, &a) {
                    let commutes = x
                        .iter()
                        .all(|e| f.apply(p.apply(e)) == g.apply(q.apply(e)));
                    if !commutes {
                        assert!(pb.mediate(&[p.clone(), q.clone()]).is_err());
                        continue;
                    }
                    let m = pb.mediate(&[p.clone(), q.clone()]).unwrap();
                    let count = all_maps(&x, &pb.apex)
                        .into_iter()
                        .filter(|cand| {
                            compose(&pb.legs[0], cand).unwrap() == p
                                && compose(&pb.legs[1], cand).unwrap() == q
                        })
                        .count();
                    assert_eq!(count, 1);
                    assert_eq!(compose(&pb.legs[0], &m).unwrap(), p);
                    assert_eq!(compose(&pb.legs[1], &m).unwrap(), q);
                }
            }
        }
    }

    #[test]
    fn pushout_of_identity_gives_iso_injection() {
        // Pushing out an identity along any map makes the opposite injection
        // an isomorphism.
        let a = set(&["x", "y"]);
        let b = set(&["u"]);
        let f = FinFn::identity(&a);
        let g = FinFn::constant(&a, &b, &Label::atom("u")).unwrap();
        let po = colimit(ColimitDiagram::Pushout(f, g));
        assert!(po.legs[1].is_bijective());
    }

    /// Independent oracle: naive closure of the generated relation.
    fn pushout_size_oracle(f: &FinFn, g: &FinFn) -> usize {
        let mut elems: Vec<Label> = f.cod().iter().map(|x| Label::left(x.clone())).collect();
        elems.extend(g.cod().iter().map(|x| Label::right(x.clone())));
        let n = elems.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, r) in rel.iter_mut().enumerate() {
            r[i] = true;
        }
        let idx = |l: &Label| elems.iter().position(|e| e == l).unwrap();
        for x in f.dom().iter() {
            let i = idx(&Label::left(f.apply(x).clone()));
            let j = idx(&Label::right(g.apply(x).clone()));
            rel[i][j] = true;
            rel[j][i] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        let mut classes = 0;
        let mut seen = vec![false; n];
        for i in 0..n {
            if !seen[i] {
                classes += 1;
                for (j, s) in seen.iter_mut().enumerate() {
                    if rel[i][j] {
                        *s = true;
                    }
                }
            }
        }
        classes
    }

    #[test]
    fn pushout_size_matches_closure_oracle() {
        let a = set(&["0"]);
        let b = set(&["0", "1"]);
        let f = FinFn::new(a.clone(), b.clone(), &[(Label::atom("0"), Label::atom("0"))]).unwrap();
        let po = colimit(ColimitDiagram::Pushout(f.clone(), f.clone()));
        assert_eq!(pushout_size_oracle(&f, &f), 3);
        assert_eq!(po.apex.len(), 3);
    }

    #[test]
    fn coproduct_of_sizes_two_and_three() {
        let c = colimit(ColimitDiagram::Coproduct(FinSet::range(2), FinSet::range(3)));
        assert_eq!(c.apex.len(), 5);
    }

    #[test]
    fn comediators_are_unique_against_enumerated_cocones() {
        let a = set(&["0", "1"]);
        let b = set(&["0", "1"]);
        let f = FinFn::identity(&a);
        let g = FinFn::new(
            a.clone(),
            b.clone(),
            &[
                (Label::atom("0"), Label::atom("1")),
                (Label::atom("1"), Label::atom("0")),
            ],
        )
        .unwrap();
        let co = colimit(ColimitDiagram::Coequalizer(f.clone(), g.clone()));
        for n in 1..=2 {
            let x = FinSet::range(n);
            for p in all_maps(&b, &x) {
                let commutes = a.iter().all(|e| p.apply(f.apply(e)) == p.apply(g.apply(e)));
                if !commutes {
                    assert!(co.comediate(&[p.clone()]).is_err());
                    continue;
                }
                let m = co.comediate(&[p.clone()]).unwrap();
                assert_eq!(compose(&m, &co.legs[0]).unwrap(), p);
                let count = all_maps(&co.apex, &x)
                    .into_iter()
                    .filter(|cand| compose(cand, &co.legs[0]).unwrap() == p)
                    .count();
                assert_eq!(count, 1);
            }
        }
    }

    #[test]
    fn exponential_sizes() {
        assert_eq!(exponential(&FinSet::range(3), &FinSet::range(1)).object.len(), 3);
        assert_eq!(exponential(&FinSet::range(4), &FinSet::empty()).object.len(), 1);
        assert_eq!(exponential(&FinSet::range(2), &FinSet::range(3)).object.len(), 8);
    }

    #[test]
    fn exponential_universal_property_exhaustive() {
        // curry/eval biject maps A x U -> G with maps A -> G^U for all sizes <= 3.
        for na in 0..=3 {
            for nu in 0..=3 {
                for ng in 0..=3 {
                    let (a, u, g) = (FinSet::range(na), FinSet::range(nu), FinSet::range(ng));
                    let exp = exponential(&g, &u);
                    let prod = limit(LimitDiagram::Product(a.clone(), u.clone()));
                    let maps_up = all_maps(&prod.apex, &g);
                    let maps_flat = all_maps(&a, &exp.object);
                    assert_eq!(maps_up.len(), maps_flat.len());
                    for m in &maps_up {
                        let t = exp.curry(&a, m).unwrap();
                        assert_eq!(&exp.uncurry(&a, &t).unwrap(), m);
                    }
                    for t in &maps_flat {
                        let m = exp.uncurry(&a, t).unwrap();
                        assert_eq!(&exp.curry(&a, &m).unwrap(), t);
                    }
                }
            }
        }
    }

    #[test]
    fn iso_search_finds_identity_on_equal_structure() {
        let a = set(&["0", "1"]);
        let phi = iso_search(&a, &a, &[]).unwrap();
        assert!(phi.is_identity());
    }

    #[test]
    fn iso_search_size_obstruction() {
        assert!(iso_search(&FinSet::range(2), &FinSet::range(3), &[]).is_none());
    }

    #[test]
    fn iso_search_with_constant_structure() {
        let a = set(&["0", "1"]);
        let b = set(&["x", "y"]);
        let c = set(&["c"]);
        let fa = FinFn::constant(&a, &c, &Label::atom("c")).unwrap();
        let fb = FinFn::constant(&b, &c, &Label::atom("c")).unwrap();
        let phi = iso_search(&a, &b, &[IsoConstraint::Out { from_a: fa.clone(), from_b: fb.clone() }])
            .unwrap();
        assert!(phi.is_bijective());
        assert_eq!(compose(&fb, &phi).unwrap(), fa);
    }
}
