//! Probe sets: the finite fragments over which universally quantified laws
//! are checked exhaustively.

use crate::cat::{Cat, CatKind, Mor, Obj};
use crate::presheaf::enumerate_presheaves;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A finite family of objects and morphisms, closed under identities.
#[derive(Clone, Debug)]
pub struct ProbeSet {
    pub objects: Vec<Obj>,
    pub morphisms: Vec<Mor>,
}

impl ProbeSet {
    pub fn new(objects: Vec<Obj>, mut morphisms: Vec<Mor>) -> ProbeSet {
        for o in &objects {
            let id = Mor::identity_of(o);
            if !morphisms.contains(&id) {
                morphisms.push(id);
            }
        }
        ProbeSet { objects, morphisms }
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Morphism indices grouped by domain object.
    pub fn by_dom(&self) -> std::collections::BTreeMap<Obj, Vec<usize>> {
        let mut map: std::collections::BTreeMap<Obj, Vec<usize>> = Default::default();
        for (i, m) in self.morphisms.iter().enumerate() {
            map.entry(m.dom()).or_default().push(i);
        }
        map
    }

    /// Morphism indices grouped by codomain object.
    pub fn by_cod(&self) -> std::collections::BTreeMap<Obj, Vec<usize>> {
        let mut map: std::collections::BTreeMap<Obj, Vec<usize>> = Default::default();
        for (i, m) in self.morphisms.iter().enumerate() {
            map.entry(m.cod()).or_default().push(i);
        }
        map
    }

    /// Composable pairs `(g, f)` with `f.cod() = g.dom()` among the probes.
    pub fn composable_pairs(&self) -> Vec<(&Mor, &Mor)> {
        let by_cod = self.by_cod();
        let mut out = Vec::new();
        for g in &self.morphisms {
            if let Some(fs) = by_cod.get(&g.dom()) {
                for &fi in fs {
                    out.push((g, &self.morphisms[fi]));
                }
            }
        }
        out
    }

    /// Cospans `(f, g)` with a common codomain among the probe morphisms.
    pub fn cospans(&self) -> Vec<(&Mor, &Mor)> {
        let by_cod = self.by_cod();
        let mut out = Vec::new();
        for (_, group) in by_cod.iter() {
            for &fi in group {
                for &gi in group {
                    out.push((&self.morphisms[fi], &self.morphisms[gi]));
                }
            }
        }
        out
    }
}

/// Enumeration bounds. `size_cap` bounds presheaf component sizes;
/// `max_objects` and `max_morphisms` cap the probe set, with deterministic
/// seeded sampling when a cap is exceeded.
#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub size_cap: usize,
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { size_cap: 2, max_objects: 64, max_morphisms: 100_000, seed: 0 }
    }
}

impl ProbeConfig {
    pub fn with_size_cap(cap: usize) -> Self {
        ProbeConfig { size_cap: cap, ..Default::default() }
    }

    pub fn tiny() -> Self {
        ProbeConfig { size_cap: 2, max_objects: 12, max_morphisms: 4_000, seed: 0 }
    }
}

fn cap_deterministic<T: Clone>(items: Vec<T>, cap: usize, seed: u64) -> Vec<T> {
    if items.len() <= cap {
        return items;
    }
    if seed == 0 {
        // Plain prefix truncation keeps runs reproducible without a seed.
        return items.into_iter().take(cap).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.shuffle(&mut rng);
    let mut chosen: Vec<usize> = idx.into_iter().take(cap).collect();
    chosen.sort();
    chosen.into_iter().map(|i| items[i].clone()).collect()
}

/// The default probe set of a category: all objects below the size cap and
/// all morphisms among them, capped by the configured budgets.
pub fn probes_for(cat: &Cat, cfg: &ProbeConfig) -> ProbeSet {
    let objects = cap_deterministic(probe_objects(cat, cfg), cfg.max_objects, cfg.seed);
    let mut morphisms = Vec::new();
    'outer: for a in &objects {
        for b in &objects {
            for m in cat.hom(a, b) {
                morphisms.push(m);
                if morphisms.len() >= cfg.max_morphisms {
                    break 'outer;
                }
            }
        }
    }
    ProbeSet::new(objects, morphisms)
}

fn probe_objects(cat: &Cat, cfg: &ProbeConfig) -> Vec<Obj> {
    match cat.kind() {
        CatKind::Psh(base) => enumerate_presheaves(base, cfg.size_cap)
            .into_iter()
            .map(Obj::Psh)
            .collect(),
        CatKind::Full { .. } => {
            let parent = cat.parent();
            probe_objects(parent, cfg)
                .into_iter()
                .filter(|o| cat.contains(o))
                .collect()
        }
        CatKind::Product(a, b) => {
            let pa = probe_objects(a, cfg);
            let pb = probe_objects(b, cfg);
            let mut out = Vec::new();
            for x in &pa {
                for y in &pb {
                    out.push(Obj::pair(x.clone(), y.clone()));
                }
            }
            out
        }
        CatKind::Gl(f) => {
            let n_cat = f.target();
            let h_cat = f.source();
            let pn = probe_objects(&n_cat, cfg);
            let ph = probe_objects(&h_cat, cfg);
            let mut out = Vec::new();
            for h in &ph {
                let fh = f.on_obj(h);
                for n in &pn {
                    for ell in n_cat.hom(n, &fh) {
                        out.push(Obj::gl(crate::cat::GlObj {
                            part_n: n.clone(),
                            part_h: h.clone(),
                            ell,
                        }));
                    }
                }
            }
            out
        }
    }
}

/// The morphisms of a probe set between two fixed objects.
pub fn probe_hom<'a>(probes: &'a ProbeSet, a: &Obj, b: &Obj) -> Vec<&'a Mor> {
    probes
        .morphisms
        .iter()
        .filter(|m| &m.dom() == a && &m.cod() == b)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseCat;

    #[test]
    fn finset_probes_include_all_small_sets() {
        let fin = Cat::psh(BaseCat::point());
        let probes = probes_for(&fin, &ProbeConfig::default());
        assert_eq!(probes.objects.len(), 3); // sizes 0, 1, 2
        // 1 + 1 + 1 (into empty only from empty) etc.; just check closure
        for o in &probes.objects {
            assert!(probes.morphisms.contains(&Mor::identity_of(o)));
        }
    }

    #[test]
    fn capping_is_deterministic() {
        let items: Vec<usize> = (0..100).collect();
        let a = cap_deterministic(items.clone(), 10, 7);
        let b = cap_deterministic(items.clone(), 10, 7);
        assert_eq!(a, b);
        let c = cap_deterministic(items, 10, 0);
        assert_eq!(c, (0..10).collect::<Vec<_>>());
    }
}
