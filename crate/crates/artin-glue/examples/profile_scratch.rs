use artin_glue::base::BaseCat;
use artin_glue::cat::{Cat, Obj};
use artin_glue::presheaf::subterminal_enumerate;
use artin_glue::probe::{probes_for, ProbeConfig};
use artin_glue::topos;
use std::time::Instant;

fn main() {
    let base = BaseCat::arrow_base("sier", "a", "b", "r");
    let cat = Cat::psh(base.clone());
    let cfg = ProbeConfig::tiny();

    let t0 = Instant::now();
    let probes = probes_for(&cat, &cfg);
    println!("probes: {} objects, {} morphisms in {:.2?}", probes.objects.len(), probes.morphisms.len(), t0.elapsed());

    for u in subterminal_enumerate(&base) {
        let u = Obj::Psh(u.presheaf().clone());
        let t1 = Instant::now();
        let r = topos::reflection_suite(&cat, &u, &cfg);
        println!("reflection_suite at {u}: passed={} in {:.2?}", r.passed(), t1.elapsed());
    }
}
