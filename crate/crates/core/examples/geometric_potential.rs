//! Exact geometric potentials: the lapse and potential that turn the
//! physical trajectory into a solution of the trajectory equations.
//!
//! Run with `cargo run --example geometric_potential`.

use torus_scatter::geometry::{eom_residual, inaffinity, lapse_3d, potential_3d, potential_lam14, solvable_system};
use torus_scatter::torus::log_grid;
use torus_scatter::{make_symmetric_model, Table, TwoChannelModel};

fn main() -> torus_scatter::Result<()> {
    let grid = log_grid(1e-3, 1e3, 1000)?;

    for (a0, a1) in [(1.0, 5.0), (1.0, -5.0), (-0.3, -2.0)] {
        let model = TwoChannelModel::scattering_length_3d(a0, a1);
        let v = potential_3d(a0, a1, 1.0)?;
        let (_, lapse) = solvable_system(&model, 1.0)?;
        let res = eom_residual(&model, &v, &lapse, &grid)?;
        println!(
            "a0 = {a0:+}, a1 = {a1:+}: A = {:.5}, eps = {:+}, N(1) = {:+.5}, kappa(1) = {:+.5}, residual {:.1e} ({} excluded)",
            v.amplitude,
            v.epsilon,
            lapse_3d(&model, 1.0, 1.0)?,
            inaffinity(&model, &lapse, 1.0)?,
            res.max_norm,
            res.excluded.len()
        );
    }

    let model = make_symmetric_model(Table::T3, 6, -2.0, -0.3, 0.25)?;
    let v = potential_lam14(&model, 1.0)?;
    let (_, lapse) = solvable_system(&model, 1.0)?;
    let res = eom_residual(&model, &v, &lapse, &grid)?;
    println!(
        "\nlambda = 1/4, T3 row 6: A = {:.5}, s = {}, lapse {:?}, residual {:.1e}",
        v.amplitude, v.scale, lapse.form, res.max_norm
    );

    let off = make_symmetric_model(Table::T3, 6, -2.0, -0.3, 0.3)?;
    println!("lambda = 0.3: {}", potential_lam14(&off, 1.0).unwrap_err());
    Ok(())
}
