use linechase::offline::{solve_offline, SolverConfig};
use linechase::sample::random_instance;
use linechase::Instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let t0 = Instant::now();
    let mut worst = (0.0f64, 0usize, 0usize);
    let mut total_sweeps = 0usize;
    for i in 0..100 {
        let instance: Instance = random_instance(2, 30, 2.0, &mut rng);
        let res = solve_offline(&instance, &SolverConfig::default()).unwrap();
        total_sweeps += res.sweeps_used;
        if res.certificate_residual > worst.0 {
            worst = (res.certificate_residual, i, res.sweeps_used);
        }
    }
    println!("worst residual {:.3e} at instance {} ({} sweeps); total sweeps {}; elapsed {:?}",
        worst.0, worst.1, worst.2, total_sweeps, t0.elapsed());
}
