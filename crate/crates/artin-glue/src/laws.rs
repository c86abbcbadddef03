//! Probe-based law checkers. Failures are reported with witnesses rather
//! than thrown, so a run can aggregate many checks.

use crate::cat::{comp, Cat, Mor, Obj};
use crate::functor::Functor;
use crate::nat::{Adjunction, NatTrans};
use crate::probe::ProbeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub subject: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> LawReport {
        LawReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, law: impl Into<String>) {
        self.checks.push(LawCheck { law: law.into(), pass: true, witness: None });
    }

    pub fn fail(&mut self, law: impl Into<String>, witness: String) {
        self.checks.push(LawCheck { law: law.into(), pass: false, witness: Some(witness) });
    }

    pub fn record(&mut self, law: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(law);
        } else {
            self.fail(law, witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&LawCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn merge(&mut self, other: LawReport) {
        for mut c in other.checks {
            c.law = format!("{}: {}", other.subject, c.law);
            self.checks.push(c);
        }
    }

    /// Panics with the first failure; test convenience.
    pub fn assert_passed(&self) {
        if let Some(first) = self.failures().first() {
            panic!(
                "{}: law `{}` failed: {}",
                self.subject,
                first.law,
                first.witness.clone().unwrap_or_default()
            );
        }
    }
}

/// Associativity, unit laws, hom-set dedup and terminal uniqueness on probes.
pub fn check_category(cat: &Cat, probes: &ProbeSet) -> LawReport {
    let mut report = LawReport::new(format!("category {cat}"));
    let mut assoc_ok = true;
    let mut assoc_witness = String::new();
    let by_cod = probes.by_cod();
    let by_dom = probes.by_dom();
    'assoc: for g in &probes.morphisms {
        let (fs, hs) = match (by_cod.get(&g.dom()), by_dom.get(&g.cod())) {
            (Some(fs), Some(hs)) => (fs, hs),
            _ => continue,
        };
        let gfs: Vec<Mor> = fs.iter().map(|&fi| comp(g, &probes.morphisms[fi])).collect();
        for &hi in hs {
            let h = &probes.morphisms[hi];
            let hg = comp(h, g);
            for (k, &fi) in fs.iter().enumerate() {
                let f = &probes.morphisms[fi];
                if comp(&hg, f) != comp(h, &gfs[k]) {
                    assoc_ok = false;
                    assoc_witness = format!("triple over {} .. {}", f.dom(), h.cod());
                    break 'assoc;
                }
            }
        }
    }
    report.record("composition associativity", assoc_ok, || assoc_witness);

    let mut unit_ok = true;
    let mut unit_witness = String::new();
    for f in &probes.morphisms {
        let l = comp(&Mor::identity_of(&f.cod()), f);
        let r = comp(f, &Mor::identity_of(&f.dom()));
        if &l != f || &r != f {
            unit_ok = false;
            unit_witness = format!("morphism {} -> {}", f.dom(), f.cod());
            break;
        }
    }
    report.record("identity laws", unit_ok, || unit_witness);

    let mut dedup_ok = true;
    let mut dedup_witness = String::new();
    for a in &probes.objects {
        for b in &probes.objects {
            let hom = cat.hom(a, b);
            let mut sorted = hom.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != hom.len() {
                dedup_ok = false;
                dedup_witness = format!("hom({a}, {b}) repeats a morphism");
            }
        }
    }
    report.record("hom enumeration without repeats", dedup_ok, || dedup_witness);

    let t = cat.terminal();
    let mut bang_ok = true;
    let mut bang_witness = String::new();
    for a in &probes.objects {
        let n = cat.hom(a, &t).len();
        if n != 1 {
            bang_ok = false;
            bang_witness = format!("hom({a}, 1) has {n} elements");
            break;
        }
    }
    report.record("terminal receives exactly one map", bang_ok, || bang_witness);
    report
}

/// Functoriality plus preservation of the chosen terminal and chosen
/// pullbacks up to the canonical comparison isomorphism.
pub fn check_functor(f: &Functor, probes: &ProbeSet) -> LawReport {
    let mut report = LawReport::new("functor");
    let target = f.target();

    let mut boundary_ok = true;
    let mut boundary_witness = String::new();
    for m in &probes.morphisms {
        let fm = f.on_mor(m);
        if fm.dom() != f.on_obj(&m.dom()) || fm.cod() != f.on_obj(&m.cod()) {
            boundary_ok = false;
            boundary_witness = format!("image of {} -> {} has a skewed boundary", m.dom(), m.cod());
            break;
        }
    }
    report.record("morphism boundaries", boundary_ok, || boundary_witness);

    let mut id_ok = true;
    let mut id_witness = String::new();
    for o in &probes.objects {
        if f.on_mor(&Mor::identity_of(o)) != Mor::identity_of(&f.on_obj(o)) {
            id_ok = false;
            id_witness = format!("identity at {o}");
            break;
        }
    }
    report.record("preserves identities", id_ok, || id_witness);

    let mut comp_ok = true;
    let mut comp_witness = String::new();
    for (g, m) in probes.composable_pairs() {
        if f.on_mor(&comp(g, m)) != comp(&f.on_mor(g), &f.on_mor(m)) {
            comp_ok = false;
            comp_witness = format!("pair over {}", m.dom());
            break;
        }
    }
    report.record("preserves composition", comp_ok, || comp_witness);

    let source = f.source();
    let ft = f.on_obj(&source.terminal());
    report.record("preserves the terminal up to iso", target.is_terminal_like(&ft), || {
        format!("image of the terminal is {ft}")
    });

    let mut pb_ok = true;
    let mut pb_witness = String::new();
    'pb: for (p, q) in probes.cospans() {
        let sq = match source.pullback(p, q) {
            Ok(sq) => sq,
            Err(_) => continue,
        };
        let image_sq = match target.pullback(&f.on_mor(p), &f.on_mor(q)) {
            Ok(sq) => sq,
            Err(_) => continue,
        };
        let cmp = target.pullback_mediate(&image_sq, &f.on_mor(&sq.p1), &f.on_mor(&sq.p2));
        match cmp {
            Ok(c) if c.is_iso() => {}
            _ => {
                pb_ok = false;
                pb_witness = format!("cospan into {}", p.cod());
                break 'pb;
            }
        }
    }
    report.record("preserves chosen pullbacks up to iso", pb_ok, || pb_witness);
    report
}

/// Component boundaries and naturality squares on probes.
pub fn check_nat(t: &NatTrans, probes: &ProbeSet) -> LawReport {
    let mut report = LawReport::new("natural transformation");
    let (src, dst) = (t.source(), t.target());

    let mut boundary_ok = true;
    let mut boundary_witness = String::new();
    for o in &probes.objects {
        let c = t.component(o);
        if c.dom() != src.on_obj(o) || c.cod() != dst.on_obj(o) {
            boundary_ok = false;
            boundary_witness = format!("component at {o}");
            break;
        }
    }
    report.record("component boundaries", boundary_ok, || boundary_witness);

    let mut nat_ok = true;
    let mut nat_witness = String::new();
    for m in &probes.morphisms {
        let lhs = comp(&t.component(&m.cod()), &src.on_mor(m));
        let rhs = comp(&dst.on_mor(m), &t.component(&m.dom()));
        if lhs != rhs {
            nat_ok = false;
            nat_witness = format!("square at {} -> {}", m.dom(), m.cod());
            break;
        }
    }
    report.record("naturality squares", nat_ok, || nat_witness);
    report
}

/// True when the components agree on every probe object.
pub fn nat_equal_on(probes: &ProbeSet, s: &NatTrans, t: &NatTrans) -> bool {
    probes.objects.iter().all(|o| s.component(o) == t.component(o))
}

/// True when the two functors agree on every probe object and morphism.
pub fn functor_equal_on(probes: &ProbeSet, f: &Functor, g: &Functor) -> bool {
    probes.objects.iter().all(|o| f.on_obj(o) == g.on_obj(o))
        && probes.morphisms.iter().all(|m| f.on_mor(m) == g.on_mor(m))
}

/// Both triangle identities, plus naturality of the unit and counit.
pub fn check_adjunction(
    adj: &Adjunction,
    source_probes: &ProbeSet,
    target_probes: &ProbeSet,
) -> LawReport {
    let mut report = LawReport::new("adjunction");
    report.merge({
        let mut r = check_nat(&adj.unit, source_probes);
        r.subject = "unit".into();
        r
    });
    report.merge({
        let mut r = check_nat(&adj.counit, target_probes);
        r.subject = "counit".into();
        r
    });

    let mut t1_ok = true;
    let mut t1_witness = String::new();
    for x in &source_probes.objects {
        let lx = adj.left.on_obj(x);
        let lhs = comp(&adj.counit.component(&lx), &adj.left.on_mor(&adj.unit.component(x)));
        if lhs != Mor::identity_of(&lx) {
            t1_ok = false;
            t1_witness = format!("at {x}");
            break;
        }
    }
    report.record("triangle identity on the left adjoint", t1_ok, || t1_witness);

    let mut t2_ok = true;
    let mut t2_witness = String::new();
    for y in &target_probes.objects {
        let ry = adj.right.on_obj(y);
        let lhs = comp(&adj.right.on_mor(&adj.counit.component(y)), &adj.unit.component(&ry));
        if lhs != Mor::identity_of(&ry) {
            t2_ok = false;
            t2_witness = format!("at {y}");
            break;
        }
    }
    report.record("triangle identity on the right adjoint", t2_ok, || t2_witness);
    report
}

/// Existence and uniqueness of mediators for every probe cone over a chosen
/// pullback square.
pub fn check_pullback_square(
    cat: &Cat,
    sq: &crate::cat::PullbackSquare,
    probes: &ProbeSet,
) -> LawReport {
    let mut report = LawReport::new("pullback square");
    let mut ok = true;
    let mut witness = String::new();
    'outer: for a in &probes.objects {
        for p in cat.hom(a, &sq.f.dom()) {
            for q in cat.hom(a, &sq.g.dom()) {
                if comp(&sq.f, &p) != comp(&sq.g, &q) {
                    continue;
                }
                let m = match cat.pullback_mediate(sq, &p, &q) {
                    Ok(m) => m,
                    Err(e) => {
                        ok = false;
                        witness = format!("mediator failed at {a}: {e}");
                        break 'outer;
                    }
                };
                if comp(&sq.p1, &m) != p || comp(&sq.p2, &m) != q {
                    ok = false;
                    witness = format!("mediator does not commute at {a}");
                    break 'outer;
                }
                let count = cat
                    .hom(a, &sq.apex)
                    .into_iter()
                    .filter(|c| comp(&sq.p1, c) == p && comp(&sq.p2, c) == q)
                    .count();
                if count != 1 {
                    ok = false;
                    witness = format!("{count} mediators at {a}");
                    break 'outer;
                }
            }
        }
    }
    report.record("universal property against probe cones", ok, || witness);
    report
}

/// True when the functor sends every probe object to a terminal-like value
/// and every probe morphism to the forced map.
pub fn zero_check(f: &Functor, probes: &ProbeSet) -> LawReport {
    let mut report = LawReport::new("zero functor");
    let target = f.target();
    let mut ok = true;
    let mut witness = String::new();
    for o in &probes.objects {
        if !target.is_terminal_like(&f.on_obj(o)) {
            ok = false;
            witness = format!("image of {o} is not terminal-like");
            break;
        }
    }
    report.record("objects collapse", ok, || witness);

    let mut mor_ok = ok;
    let mut mor_witness = String::from("objects do not collapse");
    if ok {
        for m in &probes.morphisms {
            let img = f.on_mor(m);
            let forced = crate::cat::unique_to_terminal_like(
                &target,
                &f.on_obj(&m.dom()),
                &f.on_obj(&m.cod()),
            );
            if img != forced {
                mor_ok = false;
                mor_witness = format!("image of {} -> {}", m.dom(), m.cod());
                break;
            }
        }
    }
    report.record("morphisms collapse", mor_ok, || mor_witness);
    report
}

/// Convenience: objects of a probe set as references.
pub fn objects(probes: &ProbeSet) -> impl Iterator<Item = &Obj> {
    probes.objects.iter()
}
