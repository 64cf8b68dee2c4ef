use planartd::{decompose, DecomposeConfig};
fn main() {
    let g = planartd::gen::triangulation(5000, 5).unwrap();
    let t0 = std::time::Instant::now();
    let (td, stats) = decompose(&g, &DecomposeConfig::default()).unwrap();
    println!("width {} in {:.0}ms; phases: {:?}", td.width(), t0.elapsed().as_secs_f64()*1e3, stats.phase_ms);
}
