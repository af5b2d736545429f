//! Effective-range phase shifts in three and two dimensions, and the
//! symmetric model families.
//!
//! Run with `cargo run --example ere_phase_shifts`.

use torus_scatter::ere::{Channel2D, ScatteringLength};
use torus_scatter::spin::SpinSector;
use torus_scatter::{make_symmetric_model, Channel3D, Table, TwoChannelModel};

fn main() -> torus_scatter::Result<()> {
    let channel = Channel3D::new(-2.0, -0.5);
    println!("{:>8} {:>12} {:>12} {:>12}", "p", "phi", "dphi/dp", "|S|");
    for p in [0.01, 0.1, 0.5, 1.0, 2.0, 10.0] {
        let jet = channel.jet(p)?;
        println!("{p:>8} {:>12.6} {:>12.6} {:>12.3e}", jet.value, jet.d1, channel.s_element(p)?.norm());
    }

    let unitary = Channel3D::new(ScatteringLength::Unitarity, 0.0);
    println!("\nunitarity: S(0) = {:.3}, phi(1) = {:.6}", unitary.s_element(0.0)?, unitary.jet(1.0)?.value);

    let two_d = Channel2D::scattering_length(1.0)?;
    println!("2D channel, a = 1: phi(1) = {:.6}, dphi/dp(1) = {:.6}", two_d.jet(1.0)?.value, two_d.jet(1.0)?.d1);

    let model = TwoChannelModel::scattering_length_3d(1.0, 5.0);
    println!("\nsinglet S at p = 1: {:.6}", model.s_element(SpinSector::Singlet, 1.0)?);

    for (table, row, a0, a1, lambda) in
        [(Table::T1, 4, 1.0, 5.0, 1.0), (Table::T2, 5, -15.0, -1.0, 0.01), (Table::T3, 6, -1.0, -3.0, 0.4)]
    {
        let m = make_symmetric_model(table, row, a0, a1, lambda)?;
        let (s, t) = m.channels_3d()?;
        println!("{table} row {row}: r0 = {:+.4}, r1 = {:+.4}, inversion scale {:.4}", s.r, t.r, m.inversion_scale()?);
    }
    match make_symmetric_model(Table::T3, 6, 1.0, -3.0, 0.4) {
        Err(e) => println!("T3 row 6 with a0 > 0: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
