//! Sample a trajectory on the flat torus, embed it in R^4 and track which
//! quadrant each point falls in.
//!
//! Run with `cargo run --example torus_trajectory`.

use torus_scatter::torus::{embed_r4, line_element_check, log_grid, sample_trajectory, tangent};
use torus_scatter::{TorusPoint, TwoChannelModel};

fn main() -> torus_scatter::Result<()> {
    let model = TwoChannelModel::scattering_length_3d(1.0, 5.0);
    let trajectory = sample_trajectory(&model, &log_grid(1e-3, 1e3, 13)?)?;
    println!("{:>10} {:>10} {:>10} {:>12}", "p", "phi", "theta", "quadrant");
    for s in &trajectory.samples {
        println!("{:>10.3e} {:>10.5} {:>10.5} {:>12}", s.p, s.point.phi, s.point.theta, s.quadrant);
    }

    let point = trajectory.samples[6].point;
    let e = embed_r4(point);
    println!("\nR^4 embedding at p = 1: ({:.4}, {:.4}, {:.4}, {:.4}), |x| = {:.12}", e.x, e.y, e.z, e.w, e.norm());

    let near = TorusPoint::new(point.phi + 1e-4, point.theta - 2e-4);
    println!("R^4 separation / line element: {:.8}", line_element_check(point, near)?);

    let (dphi, dtheta) = tangent(&model, 1.0)?;
    println!("tangent at p = 1: ({dphi:.6}, {dtheta:.6})");
    Ok(())
}
