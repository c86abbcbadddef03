//! Adjoint split extensions and their morphisms: the kernel/cokernel diagram
//! `N -> G <-> H` with a right-adjoint splitting and invertible counit, the
//! mate calculus deriving `beta` from `gamma`, the associated-transformation
//! map, and the equivalence with transformations between glued functors.

use crate::cat::{comp, Cat, CatError, Mor, Obj};
use crate::functor::{Functor, FunctorKind};
use crate::laws::{self, LawReport};
use crate::nat::{mate, Adjunction, MateDirection, NatTrans, TableNat};
use crate::presheaf::enumerate_presheaves;
use crate::probe::{probes_for, ProbeConfig, ProbeSet};
use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("transformation is not an isomorphism on probes: {0}")]
    NotIso(String),
    #[error("transformation is not natural on probes: {0}")]
    NotNatural(String),
    #[error("not a verified adjoint split extension: {0}")]
    NotAnExtension(String),
    #[error("not a morphism of extensions: {0}")]
    InvalidMorphism(String),
    #[error("extension is not in glueing form: {0}")]
    NotGlueingForm(String),
    #[error("extensions do not share their end categories: {0}")]
    EndMismatch(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// An adjoint split extension `N -K-> G -E-> H` with splitting `E_*`,
/// invertible counit `epsilon`, and the derived closed reflection
/// `K* -| K` at the subterminal `K(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub n: Cat,
    pub g: Cat,
    pub h: Cat,
    pub k: Functor,
    pub e: Functor,
    pub e_star: Functor,
    /// Unit of `E -| E_*`.
    pub theta: NatTrans,
    /// Counit of `E -| E_*`; componentwise an isomorphism.
    pub epsilon: NatTrans,
    pub k_star: Functor,
    /// Unit of `K* -| K`.
    pub zeta: NatTrans,
    /// Counit of `K* -| K`.
    pub delta: NatTrans,
}

impl Extension {
    /// The extension carried by a glueing category: projections and their
    /// right adjoints, with identity counits on both sides.
    pub fn glueing(f: &Functor) -> Rc<Extension> {
        let gl = Cat::glueing(f.clone());
        Rc::new(Extension {
            n: f.target(),
            g: gl.clone(),
            h: f.source(),
            k: Functor::pi1_star(&gl),
            e: Functor::pi2(&gl),
            e_star: Functor::pi2_star(&gl),
            theta: NatTrans::gl_theta(&gl),
            epsilon: NatTrans::gl_epsilon(&gl),
            k_star: Functor::pi1(&gl),
            zeta: NatTrans::gl_zeta(&gl),
            delta: NatTrans::gl_delta(&gl),
        })
    }

    /// The extension cut out of a presheaf topos by a subterminal: the slice
    /// as the open part, the kernel of `x -> x times u` as the closed part.
    pub fn subterminal(topos: &Cat, u: &Obj) -> Rc<Extension> {
        let kernel = crate::functor::kernel_cat(topos, u);
        Rc::new(Extension {
            n: kernel.clone(),
            g: topos.clone(),
            h: Cat::slice(topos, u),
            k: Functor::inclusion(&kernel),
            e: Functor::times_u(topos, u),
            e_star: Functor::exp_u(topos, u),
            theta: NatTrans::open_unit(topos, u),
            epsilon: NatTrans::open_counit(topos, u),
            k_star: Functor::k_star(topos, u),
            zeta: NatTrans::closed_unit(topos, u),
            delta: NatTrans::closed_counit(topos, u),
        })
    }

    /// `K* E_* : H -> N`, the functor this extension glues along.
    pub fn glued_functor(&self) -> Functor {
        Functor::compose(&self.k_star, &self.e_star).expect("glued boundary")
    }

    /// The glueing category of `K* E_*`.
    pub fn glueing_cat(&self) -> Cat {
        Cat::glueing(self.glued_functor())
    }

    pub fn open_adjunction(&self) -> Adjunction {
        Adjunction {
            left: self.e.clone(),
            right: self.e_star.clone(),
            unit: self.theta.clone(),
            counit: self.epsilon.clone(),
        }
    }

    pub fn closed_adjunction(&self) -> Adjunction {
        Adjunction {
            left: self.k_star.clone(),
            right: self.k.clone(),
            unit: self.zeta.clone(),
            counit: self.delta.clone(),
        }
    }

    /// When the extension is the canonical one on a glueing category,
    /// returns that category and the functor it glues.
    pub fn glueing_form(&self) -> Option<(Cat, Functor)> {
        match (self.k_star.kind(), self.e.kind()) {
            (FunctorKind::Pi1(gl1), FunctorKind::Pi2(gl2)) if gl1 == gl2 => {
                Some((gl1.clone(), gl1.gl_functor().clone()))
            }
            _ => None,
        }
    }
}

/// A morphism of extensions with shared end categories: a lex functor
/// between the middles together with the three comparison isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtMorphism {
    pub source: Rc<Extension>,
    pub target: Rc<Extension>,
    /// `Psi : G1 -> G2`.
    pub psi: Functor,
    /// `alpha : K2 -> Psi K1`.
    pub alpha: NatTrans,
    /// `beta : E2 Psi -> E1`.
    pub beta: NatTrans,
    /// `gamma : E2* -> Psi E1*`.
    pub gamma: NatTrans,
}

impl ExtMorphism {
    pub fn identity(ext: &Rc<Extension>) -> Rc<ExtMorphism> {
        let id = Functor::identity(&ext.g);
        Rc::new(ExtMorphism {
            source: ext.clone(),
            target: ext.clone(),
            psi: id,
            alpha: NatTrans::identity(&ext.k),
            beta: NatTrans::identity(&ext.e),
            gamma: NatTrans::identity(&ext.e_star),
        })
    }

    /// Composition by pasting: `second` after `first`.
    pub fn compose(
        second: &Rc<ExtMorphism>,
        first: &Rc<ExtMorphism>,
    ) -> Result<Rc<ExtMorphism>, ExtError> {
        if second.source != first.target {
            return Err(ExtError::EndMismatch("composition boundary".into()));
        }
        let psi = Functor::compose(&second.psi, &first.psi)?;
        // alpha: K3 -> Psi2 K2 -> Psi2 Psi1 K1
        let alpha = NatTrans::vcomp(
            &NatTrans::whisker_left(&second.psi, &first.alpha),
            &second.alpha,
        );
        // beta: E3 Psi2 Psi1 -> E2 Psi1 -> E1
        let beta = NatTrans::vcomp(
            &first.beta,
            &NatTrans::whisker_right(&second.beta, &first.psi),
        );
        // gamma: E3* -> Psi2 E2* -> Psi2 Psi1 E1*
        let gamma = NatTrans::vcomp(
            &NatTrans::whisker_left(&second.psi, &first.gamma),
            &second.gamma,
        );
        Ok(Rc::new(ExtMorphism {
            source: first.source.clone(),
            target: second.target.clone(),
            psi,
            alpha,
            beta,
            gamma,
        }))
    }

    /// The coherence equation and iso-ness of the comparison cells, checked
    /// on probes of the shared cokernel end.
    pub fn verify(&self, h_probes: &ProbeSet, n_probes: &ProbeSet) -> LawReport {
        let mut report = LawReport::new("extension morphism");
        let mut iso_ok = true;
        let mut iso_witness = String::new();
        for y in &h_probes.objects {
            if !self.gamma.component(y).is_iso() || !self.beta.component(y).is_iso() {
                iso_ok = false;
                iso_witness = format!("at {y}");
                break;
            }
        }
        for x in &n_probes.objects {
            if !self.alpha.component(x).is_iso() {
                iso_ok = false;
                iso_witness = format!("at {x}");
                break;
            }
        }
        report.record("comparison cells are isomorphisms", iso_ok, || iso_witness);

        let mut coh_ok = true;
        let mut coh_witness = String::new();
        for y in &h_probes.objects {
            let lhs = self.target.epsilon.component(y);
            let e1s_y = self.source.e_star.on_obj(y);
            let rhs = comp(
                &self.source.epsilon.component(y),
                &comp(
                    &self.beta.component(&e1s_y),
                    &self.target.e.on_mor(&self.gamma.component(y)),
                ),
            );
            if lhs != rhs {
                coh_ok = false;
                coh_witness = format!("at {y}");
                break;
            }
        }
        report.record("counit coherence", coh_ok, || coh_witness);
        report
    }
}

// ---------------------------------------------------------------------------
// Verification of extensions
// ---------------------------------------------------------------------------

/// Adjunction laws, counit invertibility, zero composite, kernel membership
/// equivalence and cokernel factorisation, all on default probes.
pub fn extension_verify(ext: &Rc<Extension>, cfg: &ProbeConfig) -> LawReport {
    let mut report = LawReport::new("extension");
    let g_probes = probes_for(&ext.g, cfg);
    let h_probes = probes_for(&ext.h, cfg);
    let n_probes = probes_for(&ext.n, cfg);

    report.merge({
        let mut r = laws::check_functor(&ext.k, &n_probes);
        r.subject = "kernel map".into();
        r
    });
    report.merge({
        let mut r = laws::check_functor(&ext.e, &g_probes);
        r.subject = "cokernel map".into();
        r
    });
    report.merge({
        let mut r = laws::check_functor(&ext.e_star, &h_probes);
        r.subject = "splitting".into();
        r
    });
    report.merge({
        let mut r = laws::check_adjunction(&ext.open_adjunction(), &g_probes, &h_probes);
        r.subject = "open adjunction".into();
        r
    });
    report.merge({
        let mut r = laws::check_adjunction(&ext.closed_adjunction(), &g_probes, &n_probes);
        r.subject = "closed adjunction".into();
        r
    });

    let mut eps_ok = true;
    let mut eps_witness = String::new();
    for y in &h_probes.objects {
        if !ext.epsilon.component(y).is_iso() {
            eps_ok = false;
            eps_witness = format!("at {y}");
            break;
        }
    }
    report.record("counit components are isomorphisms", eps_ok, || eps_witness);

    let ek = Functor::compose(&ext.e, &ext.k).expect("EK boundary");
    report.merge({
        let mut r = laws::zero_check(&ek, &n_probes);
        r.subject = "EK".into();
        r
    });

    // Kernel side: K-images land in Ker(E), and kernel members are fixed by
    // the closed reflection.
    let mut kin_ok = true;
    let mut kin_witness = String::new();
    for x in &n_probes.objects {
        let img = ext.e.on_obj(&ext.k.on_obj(x));
        if !ext.h.is_terminal_like(&img) {
            kin_ok = false;
            kin_witness = format!("K({x}) leaves the kernel");
            break;
        }
    }
    report.record("kernel images collapse under E", kin_ok, || kin_witness);

    let mut fix_ok = true;
    let mut fix_witness = String::new();
    for x in &g_probes.objects {
        if !ext.h.is_terminal_like(&ext.e.on_obj(x)) {
            continue;
        }
        if !ext.zeta.component(x).is_iso() {
            fix_ok = false;
            fix_witness = format!("zeta not invertible on the kernel member {x}");
            break;
        }
    }
    report.record("kernel members are fixed by the reflection", fix_ok, || fix_witness);

    let mut ff_ok = true;
    let mut ff_witness = String::new();
    'ff: for a in &n_probes.objects {
        for b in &n_probes.objects {
            let upstairs = ext.n.hom(a, b);
            let images: Vec<Mor> = upstairs.iter().map(|m| ext.k.on_mor(m)).collect();
            let mut dedup = images.clone();
            dedup.sort();
            dedup.dedup();
            let downstairs = ext.g.hom(&ext.k.on_obj(a), &ext.k.on_obj(b));
            if dedup.len() != upstairs.len() || downstairs.len() != upstairs.len() {
                ff_ok = false;
                ff_witness = format!("hom({a}, {b})");
                break 'ff;
            }
        }
    }
    report.record("kernel map is fully faithful on probes", ff_ok, || ff_witness);

    // Cokernel side: probe functors killing K factor through E via the
    // splitting, witnessed by theta having invertible image components.
    let mut factor_ok = true;
    let mut factor_witness = String::new();
    for tprime in cokernel_probe_functors(ext) {
        let tk = Functor::compose(&tprime, &ext.k).expect("probe functor boundary");
        if !laws::zero_check(&tk, &n_probes).passed() {
            factor_ok = false;
            factor_witness = "probe functor does not kill the kernel".into();
            break;
        }
        for x in &g_probes.objects {
            if !tprime.on_mor(&ext.theta.component(x)).is_iso() {
                factor_ok = false;
                factor_witness = format!("factorisation comparison not invertible at {x}");
                break;
            }
        }
    }
    report.record("cokernel factorisation through the splitting", factor_ok, || factor_witness);

    let mut split_ff_ok = true;
    let mut split_ff_witness = String::new();
    'sff: for a in &h_probes.objects {
        for b in &h_probes.objects {
            let upstairs = ext.h.hom(a, b);
            let images: Vec<Mor> = upstairs.iter().map(|m| ext.e_star.on_mor(m)).collect();
            let mut dedup = images.clone();
            dedup.sort();
            dedup.dedup();
            let downstairs = ext.g.hom(&ext.e_star.on_obj(a), &ext.e_star.on_obj(b));
            if dedup.len() != upstairs.len() || downstairs.len() != upstairs.len() {
                split_ff_ok = false;
                split_ff_witness = format!("hom({a}, {b})");
                break 'sff;
            }
        }
    }
    report.record("splitting is fully faithful on probes", split_ff_ok, || split_ff_witness);
    report
}

/// Functors out of the middle category that kill the kernel; used to probe
/// the cokernel's factorisation property.
fn cokernel_probe_functors(ext: &Rc<Extension>) -> Vec<Functor> {
    vec![
        ext.e.clone(),
        Functor::compose(&ext.e_star, &ext.e).expect("splitting composite"),
        Functor::const_terminal(&ext.g, &ext.h),
    ]
}

// ---------------------------------------------------------------------------
// The mate-derived beta and 2-cells
// ---------------------------------------------------------------------------

/// Given `alpha` and `gamma`, the unique `beta` completing a morphism of
/// extensions: the mate of `gamma`'s inverse across the two open
/// adjunctions.
pub fn beta_from_gamma(
    source: &Rc<Extension>,
    target: &Rc<Extension>,
    psi: &Functor,
    alpha: &NatTrans,
    gamma: &NatTrans,
    h_probes: &ProbeSet,
    n_probes: &ProbeSet,
) -> Result<Rc<ExtMorphism>, ExtError> {
    for y in &h_probes.objects {
        if !gamma.component(y).is_iso() {
            return Err(ExtError::NotIso(format!("gamma at {y}")));
        }
    }
    for x in &n_probes.objects {
        if !alpha.component(x).is_iso() {
            return Err(ExtError::NotIso(format!("alpha at {x}")));
        }
    }
    let beta = mate(
        &source.open_adjunction(),
        &target.open_adjunction(),
        psi,
        &Functor::identity(&source.h),
        &NatTrans::inverse(gamma),
        MateDirection::RightToLeft,
    )?;
    let m = Rc::new(ExtMorphism {
        source: source.clone(),
        target: target.clone(),
        psi: psi.clone(),
        alpha: alpha.clone(),
        beta,
        gamma: gamma.clone(),
    });
    let report = m.verify(h_probes, n_probes);
    if !report.passed() {
        let first = report.failures()[0].clone();
        return Err(ExtError::InvalidMorphism(format!(
            "{}: {}",
            first.law,
            first.witness.unwrap_or_default()
        )));
    }
    Ok(m)
}

/// Looks for the unique invertible 2-cell between parallel morphisms of
/// extensions; absence is a value.
pub fn two_morphism_find(
    m1: &Rc<ExtMorphism>,
    m2: &Rc<ExtMorphism>,
    g_probes: &ProbeSet,
    h_probes: &ProbeSet,
) -> Result<Option<NatTrans>, ExtError> {
    if m1.source != m2.source || m1.target != m2.target {
        return Err(ExtError::EndMismatch("2-cells need parallel morphisms".into()));
    }
    let e1 = &m1.source;
    let aa = NatTrans::vcomp(&m2.alpha, &NatTrans::inverse(&m1.alpha));
    let gg = NatTrans::vcomp(&m2.gamma, &NatTrans::inverse(&m1.gamma));

    // Existence criterion, componentwise on the cokernel end.
    for y in &h_probes.objects {
        let e1s_y = e1.e_star.on_obj(y);
        let zeta_comp = e1.zeta.component(&e1s_y);
        let lhs = comp(
            &aa.component(&e1.k_star.on_obj(&e1s_y)),
            &m1.psi.on_mor(&zeta_comp),
        );
        let rhs = comp(&m2.psi.on_mor(&zeta_comp), &gg.component(y));
        if lhs != rhs {
            return Ok(None);
        }
    }

    let tau = NatTrans::ext_two_cell(m1, m2);

    // The mediated cell must be invertible, natural, and restrict to the
    // given comparison cells; and it must be the only solution.
    for x in &g_probes.objects {
        let t = tau.component(x);
        if !t.is_iso() {
            return Err(ExtError::InvalidMorphism(format!("2-cell not invertible at {x}")));
        }
        let theta_x = e1.theta.component(x);
        let zeta_x = e1.zeta.component(x);
        let leg1 = comp(&aa.component(&e1.k_star.on_obj(x)), &m1.psi.on_mor(&zeta_x));
        let leg2 = comp(&gg.component(&e1.e.on_obj(x)), &m1.psi.on_mor(&theta_x));
        let dom = m1.psi.on_obj(x);
        let codomain = m2.psi.on_obj(x);
        let count = m1
            .target
            .g
            .hom(&dom, &codomain)
            .into_iter()
            .filter(|c| {
                comp(&m2.psi.on_mor(&zeta_x), c) == leg1
                    && comp(&m2.psi.on_mor(&theta_x), c) == leg2
            })
            .count();
        if count != 1 {
            return Err(ExtError::InvalidMorphism(format!(
                "{count} candidate 2-cells at {x}"
            )));
        }
        if comp(&m2.psi.on_mor(&zeta_x), &t) != leg1
            || comp(&m2.psi.on_mor(&theta_x), &t) != leg2
        {
            return Err(ExtError::InvalidMorphism(format!("mediated 2-cell skewed at {x}")));
        }
    }
    Ok(Some(tau))
}

/// The transformation `K2* E2* -> K1* E1*` associated to a morphism of
/// extensions; two parallel morphisms are 2-isomorphic exactly when their
/// associated transformations agree.
pub fn associated_nat(m: &Rc<ExtMorphism>) -> NatTrans {
    let e1 = &m.source;
    let e2 = &m.target;
    let j = e1.glued_functor();
    let part4 = NatTrans::whisker_left(&e2.k_star, &m.gamma);
    let part3 = NatTrans::whisker_left(
        &Functor::compose(&e2.k_star, &m.psi).expect("K2* Psi boundary"),
        &NatTrans::whisker_right(&e1.zeta, &e1.e_star),
    );
    let part2 = NatTrans::whisker_right(
        &NatTrans::whisker_left(&e2.k_star, &NatTrans::inverse(&m.alpha)),
        &j,
    );
    let part1 = NatTrans::whisker_right(&e2.delta, &j);
    NatTrans::vcomp(&part1, &NatTrans::vcomp(&part2, &NatTrans::vcomp(&part3, &part4)))
}

// ---------------------------------------------------------------------------
// The equivalence with transformations between glued functors
// ---------------------------------------------------------------------------

/// Builds the morphism of glueing extensions induced by `psi : F2 -> F1`:
/// the middle functor pulls `ell` back along the components of `psi`.
pub fn gamma_functor(
    psi: &NatTrans,
    h_probes: &ProbeSet,
) -> Result<Rc<ExtMorphism>, ExtError> {
    let nat_report = laws::check_nat(psi, h_probes);
    if !nat_report.passed() {
        let first = nat_report.failures()[0].clone();
        return Err(ExtError::NotNatural(format!(
            "{}: {}",
            first.law,
            first.witness.unwrap_or_default()
        )));
    }
    let f1 = psi.target();
    let f2 = psi.source();
    let source = Extension::glueing(&f1);
    let target = Extension::glueing(&f2);
    let psi_functor = Functor::gamma_psi(psi);
    let beta = NatTrans::identity_between(
        &Functor::compose(&target.e, &psi_functor).expect("beta boundary"),
        &source.e,
    );
    Ok(Rc::new(ExtMorphism {
        source,
        target,
        psi: psi_functor,
        alpha: NatTrans::gamma_alpha(psi),
        beta,
        gamma: NatTrans::gamma_gamma(psi),
    }))
}

/// The inverse direction on objects: an extension goes to `K* E_*`.
pub fn gamma_inverse(ext: &Rc<Extension>) -> Functor {
    ext.glued_functor()
}

/// The left adjoint carried by a morphism between glueing extensions: on
/// objects it post-composes `ell` with the associated components.
pub fn psi_left_adjoint(m: &Rc<ExtMorphism>) -> Result<Adjunction, ExtError> {
    let psi = match m.psi.kind() {
        FunctorKind::GammaPsi(psi) => psi.clone(),
        _ => {
            return Err(ExtError::NotGlueingForm(
                "left adjoints are built for pullback-form middles".into(),
            ))
        }
    };
    Ok(Adjunction {
        left: Functor::psi_star(&psi),
        right: m.psi.clone(),
        unit: NatTrans::psi_star_unit(&psi),
        counit: NatTrans::psi_star_counit(&psi),
    })
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of transformations between lex functors
// ---------------------------------------------------------------------------

/// Every natural transformation `source_f -> target_f` between functors on a
/// presheaf topos, as component tables over the canonical objects below the
/// size cap, filtered by naturality against all morphisms among them.
pub fn enumerate_nats(
    source_f: &Functor,
    target_f: &Functor,
    cfg: &ProbeConfig,
) -> Vec<NatTrans> {
    assert_eq!(source_f.source(), target_f.source(), "parallel functors required");
    assert_eq!(source_f.target(), target_f.target(), "parallel functors required");
    let dom_cat = source_f.source();
    let cod_cat = source_f.target();
    let base = dom_cat.base().clone();
    let objects: Vec<Obj> = enumerate_presheaves(&base, cfg.size_cap)
        .into_iter()
        .map(Obj::Psh)
        .collect();
    let mut morphisms: Vec<Mor> = Vec::new();
    for a in &objects {
        for b in &objects {
            morphisms.extend(dom_cat.hom(a, b));
        }
    }
    let choices: Vec<Vec<Mor>> = objects
        .iter()
        .map(|x| cod_cat.hom(&source_f.on_obj(x), &target_f.on_obj(x)))
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; objects.len()];
    'outer: loop {
        let entries: BTreeMap<Obj, Mor> = objects
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), choices[i][pick[i]].clone()))
            .collect();
        let natural = morphisms.iter().all(|mor| {
            let cx = &entries[&mor.dom()];
            let cy = &entries[&mor.cod()];
            comp(cy, &source_f.on_mor(mor)) == comp(&target_f.on_mor(mor), cx)
        });
        if natural {
            out.push(NatTrans::table(TableNat {
                source: source_f.clone(),
                target: target_f.clone(),
                entries,
            }));
        }
        let mut k = objects.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                continue 'outer;
            }
            pick[k] = 0;
        }
    }
    out
}
