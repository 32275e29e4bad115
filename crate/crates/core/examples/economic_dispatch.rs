//! Lambda-iteration dispatch on its own, then the sequential dispatch and
//! power-flow operating point of case30.
//!
//! cargo run --example economic_dispatch

use dispatchgen::dispatch::{lambda_iteration, solve_operating_point};
use dispatchgen::grid::bundled;
use dispatchgen::power_flow::PFOptions;

fn main() {
    let case = bundled::case30();
    let gens = case.online_generators();
    let costs: Vec<_> = gens
        .iter()
        .map(|&g| case.cost_of(g).unwrap().clone())
        .collect();
    let limits: Vec<_> = gens
        .iter()
        .map(|&g| (case.generators[g].p_min, case.generators[g].p_max))
        .collect();
    let lossless = lambda_iteration(&costs, &limits, case.total_p_demand()).unwrap();
    println!(
        "lossless dispatch: lambda {:.4}/MWh, cost {:.2}/h",
        lossless.lambda, lossless.total_cost
    );

    let op = solve_operating_point(&case, &PFOptions::default()).unwrap();
    println!(
        "with losses: lambda {:.4}/MWh, cost {:.2}/h, losses {:.3} MW, {} outer iterations",
        op.dispatch.lambda,
        op.dispatch.total_cost,
        op.solution.total_losses(),
        op.outer_iterations
    );
    for (j, &g) in op.generators.iter().enumerate() {
        println!(
            "  G{} at bus {}: {:8.3} MW ({:?})",
            g + 1,
            case.generators[g].bus.0,
            op.dispatch.p_out[j],
            op.dispatch.binding[j]
        );
    }
    for v in &op.violations {
        println!("  violation: {v:?}");
    }
}
