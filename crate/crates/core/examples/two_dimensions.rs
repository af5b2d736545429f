//! Two-dimensional scattering: phase shifts, the inversion map, the 2D
//! geometric potential and the overdetermination check.
//!
//! Run with `cargo run --example two_dimensions`.

use torus_scatter::geometry::{overdetermination_2d, potential_2d};
use torus_scatter::make_symmetric_model_2d;
use torus_scatter::symmetry::verify_phase_map;
use torus_scatter::torus::{inversion_paired_grid, log_grid};

fn main() -> torus_scatter::Result<()> {
    let model = make_symmetric_model_2d(0.3, 4.0)?;
    for p in [1e-3, 0.1, 1.0 / 1.2f64.sqrt(), 10.0, 1e3] {
        let s = model.phase_shifts(p)?;
        println!("p = {p:>9.4e}: phi = {:.6}, theta = {:.6}, phi + theta = {:.6}", s.phi, s.theta, s.phi + s.theta);
    }
    let grid = inversion_paired_grid(model.inversion_scale()?, 3.0, 201)?;
    println!("inversion map max deviation {:.1e}", verify_phase_map(&model, &grid, 1e-10)?.max_dev);

    let v = potential_2d(0.3, 4.0, 1.0)?;
    println!("2D potential amplitude {:.6}", v.amplitude);
    println!("equal lengths: {}", potential_2d(2.0, 2.0, 1.0).unwrap_err());

    let od = overdetermination_2d(&model, 1.0, &log_grid(1e-3, 1e3, 1000)?)?;
    println!(
        "overdetermination: {} points, spread {:.1e}, implied amplitude {:.9} vs closed form {:.9}",
        od.samples, od.relative_spread, od.implied_amplitude, od.closed_form_amplitude
    );
    Ok(())
}
