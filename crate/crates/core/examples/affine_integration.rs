//! Integrate the affine trajectory equations from a point on the exact
//! curve and compare with the closed form.
//!
//! Run with `cargo run --example affine_integration`.

use torus_scatter::geometry::solvable_system;
use torus_scatter::integrate::{
    affine_length, closed_form_distance, initial_state_on_curve, integrate_affine, StepControl,
};
use torus_scatter::TwoChannelModel;

fn main() -> torus_scatter::Result<()> {
    let model = TwoChannelModel::scattering_length_3d(1.0, 5.0);
    let (potential, lapse) = solvable_system(&model, 1.0)?;
    let p0 = 1.0 / 5f64.sqrt();
    let init = initial_state_on_curve(&model, &lapse, p0)?;
    let span = 0.25 * affine_length(&model, &lapse, p0)?;
    println!(
        "start ({:.6}, {:.6}), velocity ({:.6}, {:.6}), tau span {span:.6}",
        init.phi, init.theta, init.dphi, init.dtheta
    );

    let curve = integrate_affine(&potential, init, span, StepControl::default())?;
    println!("{} accepted steps, truncated: {:?}", curve.samples.len() - 1, curve.truncated);
    println!("first-integral drift {:.2e}", curve.energy_drift());
    println!("distance to closed form {:.2e}", closed_form_distance(&model, &lapse, p0, &curve)?);

    for s in curve.samples.iter().step_by(curve.samples.len() / 5 + 1) {
        println!("tau {:>8.5}  phi {:>9.6}  theta {:>9.6}  E {:.12}", s.tau, s.state.phi, s.state.theta, s.energy);
    }
    Ok(())
}
