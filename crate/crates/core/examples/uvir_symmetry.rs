//! Momentum-inversion symmetries of the symmetric model families.
//!
//! Run with `cargo run --example uvir_symmetry`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torus_scatter::symmetry::{
    expected_map, inverted_momentum, verify_density_map, verify_ep_invariance, verify_phase_map, RhoClass,
};
use torus_scatter::torus::inversion_paired_grid;
use torus_scatter::{make_symmetric_model, ProductState, Table};

fn main() -> torus_scatter::Result<()> {
    println!("p = 0.2 maps to {} for a0 = 1, a1 = 5", inverted_momentum(0.2, 1.0, 1.0, 5.0)?);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let states: Vec<ProductState> = (0..5).map(|_| ProductState::haar(&mut rng)).collect();

    let cases = [
        (Table::T1, 4, 1.0, 5.0, 1.0),
        (Table::T2, 5, -15.0, -1.0, 0.01),
        (Table::T2, 5, 15.0, 1.0, 0.01),
        (Table::T2, 2, 1.3, -0.8, 0.2),
        (Table::T3, 6, -1.0, -3.0, 0.4),
    ];
    println!("{:>4} {:>4} {:>24} {:>10} {:>10} {:>10}", "tab", "row", "rho class", "phases", "rho", "EP");
    for (table, row, a0, a1, lambda) in cases {
        let model = make_symmetric_model(table, row, a0, a1, lambda)?;
        let grid = inversion_paired_grid(model.inversion_scale()?, 3.0, 301)?;
        let phases = verify_phase_map(&model, &grid, 1e-10)?;
        let rho = verify_density_map(&model, &states, &grid, 1e-10)?;
        let class = expected_map(table, row)?.rho_class;
        // EP depends on φ − θ alone, which the mixed classes do not preserve
        let ep = match class {
            RhoClass::Rho | RhoClass::RhoBar => format!("{:.1e}", verify_ep_invariance(&model, &grid, 1e-12)?.max_dev),
            _ => "-".to_string(),
        };
        println!(
            "{:>4} {row:>4} {:>24} {:>10.1e} {:>10.1e} {ep:>10}",
            table.name(),
            format!("{class:?}"),
            phases.max_dev,
            rho.report.max_dev,
        );
        if let Some(cross) = rho.cross_block {
            println!(
                "          singlet-triplet block: vs rho {:.2e}, vs rho-bar {:.2e}",
                cross.max_dev_vs_rho, cross.max_dev_vs_rho_bar
            );
        }
    }
    Ok(())
}
