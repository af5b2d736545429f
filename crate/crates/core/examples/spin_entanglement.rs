//! Spin-space S-matrix, out-state density matrices and entanglement power.
//!
//! Run with `cargo run --example spin_entanglement`.

use std::f64::consts::{FRAC_PI_2, PI};

use torus_scatter::spin::{entanglement_power_closed, entanglement_power_mc, out_density_matrix};
use torus_scatter::{build_s_operator, build_swap, ComplexOperator4, ProductState};

fn main() -> torus_scatter::Result<()> {
    let swap = build_swap();
    println!("S(pi, 0) - SWAP: {:.1e}", build_s_operator(PI, 0.0).max_abs_diff(&swap));
    println!("S(0, pi) + SWAP: {:.1e}", build_s_operator(0.0, PI).max_abs_diff(&ComplexOperator4(-swap.matrix())));

    let s = build_s_operator(0.3, 0.3 + FRAC_PI_2);
    println!("unitarity deviation: {:.1e}", s.unitarity_deviation());

    let rho = out_density_matrix(&s, &ProductState::up_down(), false)?;
    println!(
        "trace {:.15}, min eigenvalue {:.2e}, linear entropy {:.6}",
        rho.trace().re,
        rho.min_eigenvalue(),
        rho.linear_entropy()
    );

    println!("\n{:>8} {:>10} {:>10} {:>9}", "theta-phi", "closed", "mc", "stderr");
    for k in 0..=4 {
        let d = k as f64 * PI / 8.0;
        let est = entanglement_power_mc(0.0, d, 50_000, 7 + k)?;
        println!("{d:>9.4} {:>10.6} {:>10.6} {:>9.1e}", entanglement_power_closed(0.0, d), est.mean, est.std_error);
    }
    Ok(())
}
