// two-boundary scan: zeta should equal r12, independent of r1
use loopcft::transfer::*;
use std::time::Instant;

fn main() {
    let n = 2f64.sqrt();
    let widths: Vec<usize> = (4..=10).collect();
    let t0 = Instant::now();
    let pts = two_boundary_scan(n, &[1.5], &[0.5, 1.0, 1.5, 2.0], 1.5, &widths).unwrap();
    for p in &pts {
        println!("r1={} r12={}: zeta = {:.4} ± {:.4} (n12={:.4}, ceff={:.4})", p.r1, p.r12, p.zeta, p.error, p.n12, p.ceff);
    }
    println!("-- r1 scan at fixed r12=1.0 --");
    let pts = two_boundary_scan(n, &[1.25, 1.75, 2.25, 2.75], &[1.0], 1.5, &widths).unwrap();
    for p in &pts {
        println!("r1={} r12={}: zeta = {:.4} ± {:.4}", p.r1, p.r12, p.zeta, p.error);
    }
    println!("elapsed {:?}", t0.elapsed());
}
