// crossover exponent fits
use loopcft::transfer::*;
use std::time::Instant;

fn main() {
    for (n, phi_expect) in [(2f64.sqrt(), 4.0/9.0), (1.0, 0.6)] {
        let t0 = Instant::now();
        match crossover_exponent_fit(n, &[6, 7, 8, 9, 10, 11, 12, 13], 0.02) {
            Ok(fit) => {
                println!("n={n:.4}: delta_y={:.3} delta_D={:.3} phi={:.3}±{:.3} (expect {phi_expect:.3})  [{:?}]",
                    fit.delta_y, fit.delta_delta, fit.phi, fit.phi_error, t0.elapsed());
                println!("  y scales: {:?}", fit.y_scales.iter().map(|x| format!("{}:{:.4}", x.0, x.1)).collect::<Vec<_>>());
                println!("  D scales: {:?}", fit.delta_scales.iter().map(|x| format!("{}:{:.4}", x.0, x.1)).collect::<Vec<_>>());
            }
            Err(e) => println!("n={n:.4}: FAILED {e}"),
        }
    }
}
