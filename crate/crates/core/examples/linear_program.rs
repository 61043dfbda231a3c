//! The simplex solver on a general-form program.
//!
//! ```bash
//! cargo run --example linear_program
//! ```

use sparse_omt::lp::{solve_lp, to_standard_form, GeneralLp, SimplexConfig};

fn main() {
    // a small diet problem: minimise cost subject to nutrient floors
    //   foods: oats, milk, beans   cost 0.3, 0.5, 0.8
    let mut g = GeneralLp::new(vec![0.3, 0.5, 0.8]);
    let protein = g.greater_equal(vec![(0, 4.0), (1, 8.0), (2, 12.0)], 30.0);
    let calcium = g.greater_equal(vec![(0, 1.0), (1, 10.0), (2, 3.0)], 20.0);
    g.less_equal(vec![(0, 1.0), (1, 1.0), (2, 1.0)], 8.0);
    g.set_upper(1, 2.0);

    let sf = to_standard_form(&g).expect("well-formed program");
    let sol = solve_lp(sf.program(), &SimplexConfig::default()).expect("solver error");
    println!("status {:?} after {} pivots", sol.status, sol.pivots);
    let x = sf.original_values(&sol.primal);
    println!("servings: oats {:.3}, milk {:.3}, beans {:.3}", x[0], x[1], x[2]);
    println!("cost {:.4}", sf.original_objective(&sol));

    for (name, c) in [("protein", protein), ("calcium", calcium)] {
        let row = sf.constraint_row(c).unwrap();
        println!("shadow price of {name}: {:.4}", sol.dual[row] + 0.0);
    }
    let gap = sol.objective_value - sol.dual_objective(sf.program());
    println!("duality gap {gap:.2e}");
}
