//! Polynomial-time algorithms for restricted graph classes and the dispatcher that
//! routes an instance to one of them or to the oracle.

mod dispatch;
mod ef_path;
mod path;
mod star;
mod tree_fpt;

pub use dispatch::{dispatch, maximin_shares, select_method, solve_with};
pub use ef_path::{ef_path_typed, ef_path_typed_with_guess, EfGuess};
pub use path::{path_dp_table, prop_path_greedy, prop_path_typed, PathDpTable, PathStep};
pub use star::prop_star;
pub use tree_fpt::{prop_tree_fpt, tree_dp_table, TreeDpTable};
