//! Prints the Hjelmslev census of the dual-number Veronesean set for a
//! few small fields.

use quadplane::axiomlab::check_h_axioms;
use quadplane::gf::Field;
use quadplane::quadalg::{Algebra, Kind};
use quadplane::ringplane::build_plane;
use quadplane::vsets::build_vset_matrices;

fn main() {
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        let field = Field::new(p, e, None).expect("valid field");
        let plane = build_plane(&Algebra::of_kind(field, Kind::Dual).expect("dual numbers exist"));
        let model = build_vset_matrices(&plane).expect("matrices model");
        let report = check_h_axioms(&model, &plane).expect("Hjelmslev suite runs");
        let c = &report.census;
        println!(
            "q = {:>2}: |X| = {:>3}, singular lines per point {:?}, tubes per point {:?}, |X_y| {:?}, all checks hold: {}",
            plane.algebra().q(),
            c.n,
            c.g_x,
            c.n_x,
            c.x_y,
            report.holds()
        );
    }
}
