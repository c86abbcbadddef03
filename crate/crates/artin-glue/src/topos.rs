//! Open and closed reflections of a presheaf topos at a subterminal, and the
//! kernel/cokernel operations they induce.

use crate::cat::{Cat, CatError, Membership, Obj};
use crate::functor::{kernel_cat, Functor};
use crate::laws::{self, LawReport};
use crate::nat::{Adjunction, NatTrans};
use crate::presheaf::Subterminal;
use crate::probe::{probes_for, ProbeConfig, ProbeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToposError {
    #[error("not a subterminal: {0}")]
    NotSubterminal(String),
    #[error("functor does not send the kernel to terminal objects: {0}")]
    NotZeroComposite(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// The open reflection at a subterminal: the slice, the reflector
/// `X -> X x U`, its right adjoint `(-)^U`, and the adjunction data.
#[derive(Clone, Debug)]
pub struct OpenReflection {
    pub topos: Cat,
    pub u: Obj,
    pub slice: Cat,
    pub e: Functor,
    pub e_star: Functor,
    pub adjunction: Adjunction,
}

pub fn open_reflection(topos: &Cat, u: &Obj) -> Result<OpenReflection, ToposError> {
    as_subterminal(u)?;
    let e = Functor::times_u(topos, u);
    let e_star = Functor::exp_u(topos, u);
    Ok(OpenReflection {
        topos: topos.clone(),
        u: u.clone(),
        slice: Cat::slice(topos, u),
        adjunction: Adjunction {
            left: e.clone(),
            right: e_star.clone(),
            unit: NatTrans::open_unit(topos, u),
            counit: NatTrans::open_counit(topos, u),
        },
        e,
        e_star,
    })
}

/// The closed reflection at a subterminal: the kernel of the open reflector,
/// the pushout reflector `K*`, its right adjoint inclusion, and the
/// adjunction data.
#[derive(Clone, Debug)]
pub struct ClosedReflection {
    pub topos: Cat,
    pub u: Obj,
    pub kernel: Cat,
    pub k_star: Functor,
    pub k: Functor,
    pub adjunction: Adjunction,
}

pub fn closed_reflection(topos: &Cat, u: &Obj) -> Result<ClosedReflection, ToposError> {
    as_subterminal(u)?;
    let kernel = kernel_cat(topos, u);
    let k_star = Functor::k_star(topos, u);
    let k = Functor::inclusion(&kernel);
    Ok(ClosedReflection {
        topos: topos.clone(),
        u: u.clone(),
        kernel,
        adjunction: Adjunction {
            left: k_star.clone(),
            right: k.clone(),
            unit: NatTrans::closed_unit(topos, u),
            counit: NatTrans::closed_counit(topos, u),
        },
        k_star,
        k,
    })
}

fn as_subterminal(u: &Obj) -> Result<Subterminal, ToposError> {
    match u {
        Obj::Psh(p) => {
            Subterminal::new(p.clone()).map_err(|e| ToposError::NotSubterminal(e.to_string()))
        }
        _ => Err(ToposError::NotSubterminal("not a presheaf object".into())),
    }
}

/// The kernel of a lex functor: the full subcategory of objects it sends to
/// terminal-like values, with its inclusion.
pub struct Kernel {
    pub category: Cat,
    pub inclusion: Functor,
}

pub fn kernel_of(f: &Functor) -> Kernel {
    let category = Cat::full(f.source(), Membership::SentToTerminal(f.clone()));
    Kernel { inclusion: Functor::inclusion(&category), category }
}

impl Kernel {
    /// Strict factorisation of a functor whose composite with the defining
    /// functor is zero.
    pub fn factor(
        &self,
        defining: &Functor,
        t: &Functor,
        probes: &ProbeSet,
    ) -> Result<Functor, ToposError> {
        let composite = Functor::compose(defining, t)?;
        let z = laws::zero_check(&composite, probes);
        if !z.passed() {
            return Err(ToposError::NotZeroComposite(
                z.failures()[0].witness.clone().unwrap_or_default(),
            ));
        }
        Ok(Functor::corestrict(t, &self.category))
    }
}

/// The cokernel of a lex functor into a presheaf topos: the open reflection
/// at the image of the initial object.
pub struct Cokernel {
    pub u: Obj,
    pub reflection: OpenReflection,
}

pub fn cokernel_of(f: &Functor, topos: &Cat) -> Result<Cokernel, ToposError> {
    let n_initial = f.source().initial().map_err(ToposError::Cat)?;
    let u = f.on_obj(&n_initial);
    let reflection = open_reflection(topos, &u)?;
    Ok(Cokernel { u, reflection })
}

impl Cokernel {
    /// Factors `t` through the cokernel: returns `t . E_*` together with the
    /// natural comparison `t -> (t E_*) E`, which is invertible whenever `t`
    /// kills the kernel.
    pub fn factorize(
        &self,
        f: &Functor,
        t: &Functor,
        n_probes: &ProbeSet,
        g_probes: &ProbeSet,
    ) -> Result<(Functor, NatTrans), ToposError> {
        let composite = Functor::compose(t, f)?;
        let z = laws::zero_check(&composite, n_probes);
        if !z.passed() {
            return Err(ToposError::NotZeroComposite(
                z.failures()[0].witness.clone().unwrap_or_default(),
            ));
        }
        let factor = Functor::compose(t, &self.reflection.e_star)?;
        let iso = NatTrans::whisker_left(t, &self.reflection.adjunction.unit);
        for x in &g_probes.objects {
            if !iso.component(x).is_iso() {
                return Err(ToposError::NotZeroComposite(format!(
                    "factorisation comparison not invertible at {x}"
                )));
            }
        }
        Ok((factor, iso))
    }
}

/// Both reflections at once, law-checked on probes; the working fixture for
/// a subterminal of a presheaf topos.
pub fn reflection_suite(topos: &Cat, u: &Obj, cfg: &ProbeConfig) -> LawReport {
    let mut report = LawReport::new(format!("reflections at {u}"));
    let open = match open_reflection(topos, u) {
        Ok(o) => o,
        Err(e) => {
            report.fail("open reflection construction", e.to_string());
            return report;
        }
    };
    let closed = closed_reflection(topos, u).expect("subterminal already validated");
    let topos_probes = probes_for(topos, cfg);
    let slice_probes = probes_for(&open.slice, cfg);
    let kernel_probes = probes_for(&closed.kernel, cfg);

    report.merge({
        let mut r = laws::check_functor(&open.e, &topos_probes);
        r.subject = "reflector".into();
        r
    });
    report.merge({
        let mut r = laws::check_functor(&open.e_star, &slice_probes);
        r.subject = "open splitting".into();
        r
    });
    report.merge({
        let mut r = laws::check_adjunction(&open.adjunction, &topos_probes, &slice_probes);
        r.subject = "open adjunction".into();
        r
    });
    report.merge({
        let mut r = laws::check_functor(&closed.k_star, &topos_probes);
        r.subject = "closed reflector".into();
        r
    });
    report.merge({
        let mut r = laws::check_adjunction(&closed.adjunction, &topos_probes, &kernel_probes);
        r.subject = "closed adjunction".into();
        r
    });

    let mut eps_ok = true;
    let mut eps_witness = String::new();
    for s in &slice_probes.objects {
        if !open.adjunction.counit.component(s).is_iso() {
            eps_ok = false;
            eps_witness = format!("at {s}");
            break;
        }
    }
    report.record("open counit components are isomorphisms", eps_ok, || eps_witness);

    let mut delta_ok = true;
    let mut delta_witness = String::new();
    for x in &kernel_probes.objects {
        if !closed.adjunction.counit.component(x).is_iso() {
            delta_ok = false;
            delta_witness = format!("at {x}");
            break;
        }
    }
    report.record("closed counit components are isomorphisms", delta_ok, || delta_witness);
    report
}

/// Membership agreement between the kernel of the cokernel of the closed
/// inclusion and the closed reflection's own kernel.
pub fn kernel_cokernel_agreement(topos: &Cat, u: &Obj, cfg: &ProbeConfig) -> LawReport {
    let mut report = LawReport::new("kernel of cokernel");
    let closed = match closed_reflection(topos, u) {
        Ok(c) => c,
        Err(e) => {
            report.fail("construction", e.to_string());
            return report;
        }
    };
    let n_probes = probes_for(&closed.kernel, cfg);
    let coker = match cokernel_of(&closed.k, topos) {
        Ok(c) => c,
        Err(e) => {
            report.fail("cokernel construction", e.to_string());
            return report;
        }
    };
    report.record("cokernel slices at the kernel's initial image", coker.u == *u, || {
        format!("images differ: {} vs {u}", coker.u)
    });

    let topos_probes = probes_for(topos, cfg);
    let ker = kernel_of(&coker.reflection.e);
    let mut agree_ok = true;
    let mut agree_witness = String::new();
    for x in &topos_probes.objects {
        if ker.category.contains(x) != closed.kernel.contains(x) {
            agree_ok = false;
            agree_witness = format!("membership differs at {x}");
            break;
        }
    }
    report.record("membership agreement on probes", agree_ok, || agree_witness);

    // The factorisation comparison chain for a few probe functors.
    let g_probes = &topos_probes;
    for (i, t) in [
        coker.reflection.e.clone(),
        Functor::compose(&coker.reflection.e_star, &coker.reflection.e)
            .expect("composite boundary"),
        Functor::const_terminal(topos, &coker.reflection.slice),
    ]
    .iter()
    .enumerate()
    {
        match coker.factorize(&closed.k, t, &n_probes, g_probes) {
            Ok((_, iso)) => {
                let all_iso = g_probes.objects.iter().all(|x| iso.component(x).is_iso());
                report.record(
                    format!("factorisation chain for probe functor {i}"),
                    all_iso,
                    || "comparison not invertible".into(),
                );
            }
            Err(e) => report.fail(
                format!("factorisation chain for probe functor {i}"),
                e.to_string(),
            ),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseCat;
    use crate::functor::Functor;
    use crate::presheaf::subterminal_enumerate;

    fn toposes() -> Vec<Cat> {
        vec![
            Cat::psh(BaseCat::point()),
            Cat::psh(BaseCat::discrete("p2", &["l", "r"])),
            Cat::psh(BaseCat::arrow_base("sier", "a", "b", "r")),
        ]
    }

    #[test]
    fn reflection_laws_for_every_subterminal() {
        let cfg = ProbeConfig::tiny();
        for topos in toposes() {
            for u in subterminal_enumerate(topos.base()) {
                let u = Obj::Psh(u.presheaf().clone());
                reflection_suite(&topos, &u, &cfg).assert_passed();
            }
        }
    }

    #[test]
    fn open_reflection_degenerate_cases() {
        // U terminal: the reflector is isomorphic to the identity and the
        // counit is invertible. U initial: everything collapses.
        let topos = Cat::psh(BaseCat::point());
        let probes = probes_for(&topos, &ProbeConfig::tiny());
        let t = topos.terminal();
        let open_t = open_reflection(&topos, &t).unwrap();
        for x in &probes.objects {
            let ex = open_t.e.on_obj(x);
            assert_eq!(ex.size(), x.size());
        }
        let zero = topos.initial().unwrap();
        let open_0 = open_reflection(&topos, &zero).unwrap();
        let slice_terminal = open_0.slice.terminal();
        for x in &probes.objects {
            // X x 0 is terminal-like in the slice over 0.
            assert!(open_0.slice.is_terminal_like(&open_0.e.on_obj(x)));
        }
        assert_eq!(slice_terminal, zero);
    }

    #[test]
    fn closed_reflection_on_two_point_base() {
        // U = (1, 0): K*(G) = (1, G_r) and E_* E(G) = (G_l, 1).
        let base = BaseCat::discrete("p2", &["l", "r"]);
        let topos = Cat::psh(base.clone());
        let u = subterminal_enumerate(&base)
            .into_iter()
            .find(|s| s.supported_at(0) && !s.supported_at(1))
            .unwrap();
        let u = Obj::Psh(u.presheaf().clone());
        let closed = closed_reflection(&topos, &u).unwrap();
        let open = open_reflection(&topos, &u).unwrap();
        let probes = probes_for(&topos, &ProbeConfig::with_size_cap(2));
        for x in &probes.objects {
            let p = x.as_psh();
            let kx = closed.k_star.on_obj(x);
            assert_eq!(kx.as_psh().at(0).len(), 1, "closed part collapses the support");
            assert_eq!(kx.as_psh().at(1).len(), p.at(1).len());
            let ex = open.e_star.on_obj(&open.e.on_obj(x));
            assert_eq!(ex.as_psh().at(0).len(), p.at(0).len());
            assert_eq!(ex.as_psh().at(1).len(), 1);
        }
    }

    #[test]
    fn closed_reflection_degenerate_cases() {
        let topos = Cat::psh(BaseCat::point());
        let probes = probes_for(&topos, &ProbeConfig::tiny());
        // U initial: the reflector is the identity up to iso.
        let zero = topos.initial().unwrap();
        let closed_0 = closed_reflection(&topos, &zero).unwrap();
        for x in &probes.objects {
            assert_eq!(closed_0.k_star.on_obj(x).size(), x.size());
            assert!(closed_0.adjunction.unit.component(x).is_iso());
        }
        // U terminal: everything collapses to a point.
        let one = topos.terminal();
        let closed_1 = closed_reflection(&topos, &one).unwrap();
        for x in &probes.objects {
            assert!(topos.is_terminal_like(&closed_1.k_star.on_obj(x)));
        }
    }

    #[test]
    fn zero_check_examples() {
        let topos = Cat::psh(BaseCat::point());
        let probes = probes_for(&topos, &ProbeConfig::tiny());
        let the_zero = Functor::const_terminal(&topos, &topos);
        assert!(laws::zero_check(&the_zero, &probes).passed());
        let id = Functor::identity(&topos);
        assert!(!laws::zero_check(&id, &probes).passed());
        // E after the kernel inclusion collapses, for every subterminal.
        for u in subterminal_enumerate(topos.base()) {
            let u = Obj::Psh(u.presheaf().clone());
            let closed = closed_reflection(&topos, &u).unwrap();
            let open = open_reflection(&topos, &u).unwrap();
            let n_probes = probes_for(&closed.kernel, &ProbeConfig::tiny());
            let ek = Functor::compose(&open.e, &closed.k).unwrap();
            assert!(laws::zero_check(&ek, &n_probes).passed());
        }
    }

    #[test]
    fn kernel_and_cokernel_agree() {
        let cfg = ProbeConfig::tiny();
        for topos in toposes() {
            for u in subterminal_enumerate(topos.base()) {
                let u = Obj::Psh(u.presheaf().clone());
                kernel_cokernel_agreement(&topos, &u, &cfg).assert_passed();
            }
        }
    }

    #[test]
    fn cokernel_of_identity_forces_zero() {
        // The cokernel of the identity slices over the initial object; only
        // functors that already collapse everything factor through it.
        let topos = Cat::psh(BaseCat::point());
        let id = Functor::identity(&topos);
        let coker = cokernel_of(&id, &topos).unwrap();
        assert_eq!(coker.u, topos.initial().unwrap());
        let probes = probes_for(&topos, &ProbeConfig::tiny());
        let res = coker.factorize(&id, &Functor::identity(&topos), &probes, &probes);
        assert!(matches!(res, Err(ToposError::NotZeroComposite(_))));
    }

    #[test]
    fn kernel_factorisation_is_strict() {
        // Over the empty subterminal the reflector collapses everything, so
        // its kernel is the whole topos and any functor factors strictly.
        let topos = Cat::psh(BaseCat::point());
        let u = topos.initial().unwrap();
        let open = open_reflection(&topos, &u).unwrap();
        let ker = kernel_of(&open.e);
        let probes = probes_for(&topos, &ProbeConfig::tiny());
        let t = Functor::identity(&topos);
        let factored = ker.factor(&open.e, &t, &probes).unwrap();
        for x in &probes.objects {
            assert_eq!(factored.on_obj(x), t.on_obj(x));
        }
        // With U = 1 the identity does not kill the kernel.
        let one = topos.terminal();
        let open1 = open_reflection(&topos, &one).unwrap();
        let ker1 = kernel_of(&open1.e);
        assert!(ker1.factor(&open1.e, &t, &probes).is_err());
    }
}
