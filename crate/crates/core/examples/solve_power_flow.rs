//! Newton-Raphson power flow on a bundled case, printed as a YAML solution document.
//!
//! cargo run --example solve_power_flow [-- <case> [<load scale>]]

use dispatchgen::grid::bundled;
use dispatchgen::power_flow::{
    loading_ratios, rank_by_loading, solve_nr, PFOptions, SolutionDocument,
};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "case14".into());
    let scale: f64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1.0);
    let case = bundled::load(&name)
        .expect("bundled case name")
        .with_load_scale(scale);
    let result = solve_nr(&case, &PFOptions::default());
    if let Ok(sol) = &result {
        let ratios = loading_ratios(&case, sol);
        for k in rank_by_loading(&case, &ratios).into_iter().take(3) {
            let br = &case.branches[k];
            eprintln!(
                "branch {k} ({} - {}): {:.1}% of rating",
                br.from_bus.0,
                br.to_bus.0,
                100.0 * ratios[k]
            );
        }
        eprintln!("losses {:.3} MW", sol.total_losses());
    }
    print!("{}", SolutionDocument::new(&case, &result).to_yaml());
}
