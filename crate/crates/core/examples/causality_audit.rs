//! Wigner bounds and the tangent-vector and quadrant-exit audits of
//! zero-range trajectories.
//!
//! Run with `cargo run --example causality_audit`.

use torus_scatter::causality::{
    effective_area_bound_2d, quadrant_exit_audit, tangent_vector_audit, threshold_range_bound_3d,
    wigner_derivative_bound,
};
use torus_scatter::torus::{log_grid, sample_trajectory};
use torus_scatter::{make_symmetric_model, Table, TwoChannelModel};

fn main() -> torus_scatter::Result<()> {
    println!(
        "dδ/dp bound at p = 1, δ = π/4, R = 0: {}",
        wigner_derivative_bound(1.0, std::f64::consts::FRAC_PI_4, 0.0)?
    );
    println!("threshold range bound R = 1, a = -1: {:.6}", threshold_range_bound_3d(1.0, -1.0)?);
    for r in [1e-3, 1e-2, 1e-1, 1.0] {
        println!("2D effective-area bound R = {r:e}, a = 1: {:.6e}", effective_area_bound_2d(r, 1.0)?);
    }

    let grid = log_grid(1e-3, 1e3, 2000)?;
    let models = [
        ("zero range", TwoChannelModel::scattering_length_3d(1.0, 5.0)),
        ("T3 row 6", make_symmetric_model(Table::T3, 6, -1.0, -3.0, 0.4)?),
        ("T2 row 6, a > 0", make_symmetric_model(Table::T2, 6, 1.0, 3.0, 0.4)?),
    ];
    println!();
    for (name, model) in models {
        let tangent = tangent_vector_audit(&model, &grid, 1e-9)?;
        let exits = quadrant_exit_audit(&sample_trajectory(&model, &grid)?)?;
        let edges: Vec<_> = exits.crossings.iter().map(|c| format!("{:?}", c.edge)).collect();
        println!(
            "{name:>16}: {} tangent violations, exits [{}], forbidden {}",
            tangent.violations.len(),
            edges.join(", "),
            exits.forbidden
        );
    }
    Ok(())
}
