use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    hsl_core::opalgebra::table10();
    println!("table10 derivation: {:?}", t0.elapsed());
    let t0 = Instant::now();
    hsl_core::opalgebra::table_omega();
    println!("table_omega derivation: {:?}", t0.elapsed());
    for id in hsl_core::opalgebra::catalogue() {
        let t0 = Instant::now();
        let r = hsl_core::opalgebra::verify_module_identity(id).unwrap();
        println!("{}: holds={} ({:?})", r.identity, r.holds, t0.elapsed());
        assert!(r.holds);
    }
}
