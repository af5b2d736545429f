//! Pole positions of the causal family as λ moves through 1/4.
//!
//! Run with `cargo run --example pole_flow`.

use torus_scatter::poles::{collision_gap, poles_closed_form, poles_numeric, verify_lower_half};

fn main() -> torus_scatter::Result<()> {
    let a = -1.0;
    println!("{:>8} {:>16} {:>34} {:>10}", "lambda", "case", "poles", "numeric");
    for lambda in [0.05, 0.125, 0.2, 0.25, 0.3, 0.5, 1.0, 10.0] {
        let closed = poles_closed_form(a, lambda)?;
        let numeric = poles_numeric(a, 2.0 * a * lambda)?;
        let poles: Vec<_> = closed
            .poles
            .iter()
            .map(|p| format!("{:+.4}{:+.4}i{}", p.re, p.im, if p.mult > 1 { " (x2)" } else { "" }))
            .collect();
        assert!(verify_lower_half(&closed));
        println!(
            "{lambda:>8} {:>16} {:>34} {:>10.1e}",
            format!("{:?}", closed.case),
            poles.join("  "),
            closed.distance(&numeric)
        );
    }
    println!(
        "\ncollision gap at 1/4 -/+ 1e-6: {:.2e} {:.2e}",
        collision_gap(a, 0.25 - 1e-6)?,
        collision_gap(a, 0.25 + 1e-6)?
    );

    let bound = poles_numeric(1.0, 0.0)?;
    println!("r = 0, a = 1: {:?} at {:+}i", bound.case, bound.poles[0].im);
    Ok(())
}
