//! Instance generators that encode hard source problems, with certificate maps in both
//! directions and brute-force checkers for the sources.

mod clique;
mod mcis;
mod sat;
mod smti;

pub use clique::{four_vertex_demo, gen_clique, CliqueGadget, Graph};
pub use mcis::{gen_mcis, gen_mcis_unchecked, two_color_demo, ColoredGraph, McisGadget};
pub use sat::{gen_sat, CnfFormula, SatGadget};
pub use smti::{gen_smti, Smti, SmtiGadget};

use crate::model::Instance;

/// Smallest instance with no stable matching: three hospitals with lower quota 2 and three
/// residents in a cycle.
pub fn gen_counterexample() -> Instance {
    crate::fixtures::f1()
}
