use planartd::{decompose, DecomposeConfig};
use std::time::Instant;

fn run(name: &str, g: &planartd::EmbeddedGraph) {
    let t0 = Instant::now();
    match decompose(g, &DecomposeConfig::default()) {
        Err(e) => println!("{name}: n={} ERROR {e}", g.n()),
        Ok((td, stats)) => {
            let rep = planartd::verify::validate_td(g, &td);
            println!(
                "{name}: n={} width={} k={} depth={} cyc={}/{}/{} fb={} valid={} attempts={:?} {:.0}ms",
                g.n(), td.width(), stats.k_used, stats.recursion_depth,
                stats.coast.flow_cuts, stats.coast.composed_cycles, stats.coast.essential_cycles,
                stats.trivial_fallbacks, rep.ok, stats.attempts, t0.elapsed().as_secs_f64()*1e3
            );
        }
    }
}

fn main() {
    run("tri500", &planartd::gen::triangulation(500, 3).unwrap());
    run("tri2000", &planartd::gen::triangulation(2000, 4).unwrap());
    run("tri5000", &planartd::gen::triangulation(5000, 5).unwrap());
    run("grid30", &planartd::gen::grid(30, 30, true).unwrap());
    run("grid50", &planartd::gen::grid(50, 50, true).unwrap());
    run("tower(20,5)", &planartd::gen::tower(20, 5).unwrap());
    run("towerchain3", &planartd::gen::tower_chain(3, 14, 5, 3).unwrap());
    run("twin(3,8)", &planartd::gen::twin_peaks(3, 8).unwrap());
    run("chain(8,4)", &planartd::gen::mountain_chain(8, 4, 5).unwrap());
}
