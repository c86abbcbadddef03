//! Glueing construction and its verification surface: the projections and
//! their adjoints, cartesian liftings over both projections, the comparison
//! functor onto glueing form and its inverse, and the pullback
//! representation of objects and morphisms.

use crate::cat::{comp, Cat, CatError, GlObj, Mor, Obj};
use crate::ext::{ExtMorphism, Extension};
use crate::functor::{phi_inv_square, Functor};
use crate::laws::{self, LawReport};
use crate::nat::{Adjunction, NatTrans};
use crate::probe::{probes_for, ProbeConfig, ProbeSet};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlueError {
    #[error("the functor to glue along is not finite-limit-preserving: {0}")]
    NotLex(String),
    #[error("not a verified adjoint split extension: {0}")]
    NotAnExtension(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// A constructed glueing: the category, both projections, their right
/// adjoints, and the two units.
#[derive(Clone, Debug)]
pub struct Glueing {
    pub cat: Cat,
    pub along: Functor,
    pub pi1: Functor,
    pub pi2: Functor,
    pub pi1_star: Functor,
    pub pi2_star: Functor,
    pub theta: NatTrans,
    pub zeta: NatTrans,
    pub pi2_adjunction: Adjunction,
    pub pi1_adjunction: Adjunction,
    pub extension: Rc<Extension>,
}

/// Glues along `f` after law-checking it on probes of its source.
pub fn glue_construct(f: &Functor, cfg: &ProbeConfig) -> Result<Glueing, GlueError> {
    let h_probes = probes_for(&f.source(), cfg);
    let report = laws::check_functor(f, &h_probes);
    if !report.passed() {
        let first = report.failures()[0].clone();
        return Err(GlueError::NotLex(format!(
            "{}: {}",
            first.law,
            first.witness.unwrap_or_default()
        )));
    }
    Ok(glue_unchecked(f))
}

/// The glueing data without the lex check; for functors already validated.
pub fn glue_unchecked(f: &Functor) -> Glueing {
    let cat = Cat::glueing(f.clone());
    let extension = Extension::glueing(f);
    Glueing {
        cat: cat.clone(),
        along: f.clone(),
        pi1: Functor::pi1(&cat),
        pi2: Functor::pi2(&cat),
        pi1_star: Functor::pi1_star(&cat),
        pi2_star: Functor::pi2_star(&cat),
        theta: NatTrans::gl_theta(&cat),
        zeta: NatTrans::gl_zeta(&cat),
        pi2_adjunction: extension.open_adjunction(),
        pi1_adjunction: Adjunction {
            left: extension.k_star.clone(),
            right: extension.k.clone(),
            unit: extension.zeta.clone(),
            counit: extension.delta.clone(),
        },
        extension,
    }
}

/// Which projection a lift is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftSide {
    Pi1,
    Pi2,
}

/// The cartesian lift of a base morphism into the image of a glueing object.
///
/// Over `pi2`, the lift of `f : H' -> H` into `(n, h, ell)` pulls `ell` back
/// along `F(f)`; over `pi1`, the lift of `f : N' -> N` reuses `ell . f`.
pub fn cartesian_lift(
    gl: &Cat,
    side: LiftSide,
    target: &Obj,
    f: &Mor,
) -> Result<Mor, GlueError> {
    let func = gl.gl_functor();
    let t = target.as_gl();
    match side {
        LiftSide::Pi2 => {
            if f.cod() != t.part_h {
                return Err(GlueError::BoundaryMismatch(
                    "base morphism must land in the object's open part".into(),
                ));
            }
            let n_cat = func.target();
            let ff = func.on_mor(f);
            let sq = n_cat.pullback(&t.ell, &ff)?;
            let dom = GlObj {
                part_n: sq.apex,
                part_h: f.dom(),
                ell: sq.p2,
            };
            Ok(gl.gl_mor(&dom, t, sq.p1, f.clone())?)
        }
        LiftSide::Pi1 => {
            if f.cod() != t.part_n {
                return Err(GlueError::BoundaryMismatch(
                    "base morphism must land in the object's closed part".into(),
                ));
            }
            let dom = GlObj {
                part_n: f.dom(),
                part_h: t.part_h.clone(),
                ell: comp(&t.ell, f),
            };
            Ok(gl.gl_mor(&dom, t, f.clone(), Mor::identity_of(&t.part_h))?)
        }
    }
}

/// Existence and uniqueness of factorisations through a cartesian lift,
/// checked against every probe morphism into the target.
pub fn cartesian_check(
    gl: &Cat,
    side: LiftSide,
    lift: &Mor,
    probes: &ProbeSet,
) -> LawReport {
    let mut report = LawReport::new("cartesian lift");
    let func = gl.gl_functor();
    let lm = lift.as_gl();
    let target = Obj::gl(lm.cod.clone());
    let lift_dom = Obj::gl(lm.dom.clone());
    let base_cat = match side {
        LiftSide::Pi1 => func.target(),
        LiftSide::Pi2 => func.source(),
    };
    let project = |m: &Mor| match side {
        LiftSide::Pi1 => m.as_gl().f.clone(),
        LiftSide::Pi2 => m.as_gl().g.clone(),
    };
    let base_of = |o: &Obj| match side {
        LiftSide::Pi1 => o.as_gl().part_n.clone(),
        LiftSide::Pi2 => o.as_gl().part_h.clone(),
    };
    let lift_base = project(lift);

    let mut ok = true;
    let mut witness = String::new();
    'outer: for w in &probes.objects {
        for g in gl.hom(w, &target) {
            // Factor the projected map through the lift's base leg in every
            // possible way, and demand a unique lift each time.
            for h in base_cat.hom(&base_of(w), &base_of(&lift_dom)) {
                if comp(&lift_base, &h) != project(&g) {
                    continue;
                }
                let candidates: Vec<Mor> = gl
                    .hom(w, &lift_dom)
                    .into_iter()
                    .filter(|cand| project(cand) == h && comp(lift, cand) == g)
                    .collect();
                if candidates.len() != 1 {
                    ok = false;
                    witness = format!(
                        "{} factorisations of a map from {w}",
                        candidates.len()
                    );
                    break 'outer;
                }
            }
        }
    }
    report.record("unique factorisation through the lift", ok, || witness);
    report
}

/// The comparison of an extension with its glueing form, as a morphism of
/// extensions `(Phi, alpha, id, gamma)`.
pub fn phi(ext: &Rc<Extension>) -> Rc<ExtMorphism> {
    let target = Extension::glueing(&ext.glued_functor());
    let beta = NatTrans::identity_between(
        &Functor::compose(&target.e, &Functor::phi(ext)).expect("beta boundary"),
        &ext.e,
    );
    Rc::new(ExtMorphism {
        source: ext.clone(),
        target,
        psi: Functor::phi(ext),
        alpha: NatTrans::phi_alpha(ext),
        beta,
        gamma: NatTrans::phi_gamma(ext),
    })
}

/// The inverse comparison functor together with the two natural
/// isomorphisms witnessing the equivalence.
pub struct PhiEquivalence {
    pub forward: Functor,
    pub backward: Functor,
    /// `Id -> backward . forward`.
    pub unit: NatTrans,
    /// `forward . backward -> Id`.
    pub counit: NatTrans,
}

pub fn phi_inverse(ext: &Rc<Extension>) -> PhiEquivalence {
    PhiEquivalence {
        forward: Functor::phi(ext),
        backward: Functor::phi_inv(ext),
        unit: NatTrans::phi_unit(ext),
        counit: NatTrans::phi_counit(ext),
    }
}

/// Round-trip verification: the unit and counit of the comparison
/// equivalence have isomorphism components on probes.
pub fn phi_roundtrip_check(ext: &Rc<Extension>, cfg: &ProbeConfig) -> LawReport {
    let mut report = LawReport::new("glueing-form comparison");
    let eq = phi_inverse(ext);
    let g_probes = probes_for(&ext.g, cfg);
    let gl_probes = probes_for(&ext.glueing_cat(), cfg);

    report.merge({
        let mut r = laws::check_functor(&eq.forward, &g_probes);
        r.subject = "comparison functor".into();
        r
    });
    report.merge({
        let mut r = laws::check_nat(&eq.unit, &g_probes);
        r.subject = "unit".into();
        r
    });
    report.merge({
        let mut r = laws::check_nat(&eq.counit, &gl_probes);
        r.subject = "counit".into();
        r
    });

    let mut unit_ok = true;
    let mut unit_witness = String::new();
    for x in &g_probes.objects {
        if !eq.unit.component(x).is_iso() {
            unit_ok = false;
            unit_witness = format!("at {x}");
            break;
        }
    }
    report.record("unit components are isomorphisms", unit_ok, || unit_witness);

    let mut counit_ok = true;
    let mut counit_witness = String::new();
    for x in &gl_probes.objects {
        if !eq.counit.component(x).is_iso() {
            counit_ok = false;
            counit_witness = format!("at {x}");
            break;
        }
    }
    report.record("counit components are isomorphisms", counit_ok, || counit_witness);
    report
}

/// For every probe object, the canonical comparison into the pullback of the
/// two reflections is an isomorphism; for every probe morphism, mediating
/// the reflected cone recovers exactly that morphism.
pub fn pullback_representation_check(
    ext: &Rc<Extension>,
    probes: &ProbeSet,
) -> LawReport {
    let mut report = LawReport::new("pullback representation");
    let g_cat = &ext.g;

    let mut obj_ok = true;
    let mut obj_witness = String::new();
    let mut checked = 0usize;
    for x in &probes.objects {
        let sq = representation_square(ext, x);
        let cmp = match g_cat.pullback_mediate(&sq, &ext.zeta.component(x), &ext.theta.component(x))
        {
            Ok(c) => c,
            Err(e) => {
                obj_ok = false;
                obj_witness = format!("no comparison at {x}: {e}");
                break;
            }
        };
        if !cmp.is_iso() {
            obj_ok = false;
            obj_witness = format!("comparison not invertible at {x}");
            break;
        }
        checked += 1;
    }
    report.record(
        format!("object comparison is an isomorphism ({checked} probes)"),
        obj_ok,
        || obj_witness,
    );

    let mut mor_ok = true;
    let mut mor_witness = String::new();
    for m in &probes.morphisms {
        let x = m.dom();
        let y = m.cod();
        let sq_y = representation_square(ext, &y);
        let cone1 = comp(&ext.zeta.component(&y), m);
        let cone2 = comp(&ext.theta.component(&y), m);
        let mediated = match g_cat.pullback_mediate(&sq_y, &cone1, &cone2) {
            Ok(v) => v,
            Err(e) => {
                mor_ok = false;
                mor_witness = format!("no mediator for a probe morphism: {e}");
                break;
            }
        };
        let cmp_y = g_cat
            .pullback_mediate(&sq_y, &ext.zeta.component(&y), &ext.theta.component(&y))
            .expect("object comparison exists");
        if mediated != comp(&cmp_y, m) {
            mor_ok = false;
            mor_witness = format!("mediated morphism differs from the probe at {x}");
            break;
        }
    }
    report.record("morphism mediation returns the probe", mor_ok, || mor_witness);
    report
}

/// The cospan `K K*(x) -> K K* E_* E(x) <- E_* E(x)` as a chosen pullback.
fn representation_square(
    ext: &Rc<Extension>,
    x: &Obj,
) -> crate::cat::PullbackSquare {
    let theta_x = ext.theta.component(x);
    let left = ext.k.on_mor(&ext.k_star.on_mor(&theta_x));
    let right = ext
        .zeta
        .component(&ext.e_star.on_obj(&ext.e.on_obj(x)));
    ext.g.pullback(&left, &right).expect("representation cospan pullback")
}

/// The representing pullback written out for opaque callers.
pub fn representation_square_at(ext: &Rc<Extension>, x: &Obj) -> crate::cat::PullbackSquare {
    representation_square(ext, x)
}

/// Keep the comparison equivalence honest on a handful of named objects;
/// exposed separately so builders can spot-check cheap cases.
pub fn phi_on(ext: &Rc<Extension>, x: &Obj) -> Obj {
    Functor::phi(ext).on_obj(x)
}

pub fn phi_inv_on(ext: &Rc<Extension>, x: &Obj) -> Obj {
    phi_inv_square(ext, x.as_gl()).apex
}
