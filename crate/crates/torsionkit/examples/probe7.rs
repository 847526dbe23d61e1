use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsionkit::abelian::cokernel;
use torsionkit::synth::random_mod_r_presentation;
use torsionkit::pipeline::check_mod_r_theorem;
use torsionkit::pipeline::parse::render_presentation;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    let rs = [2u64, 3, 4, 5];
    for trial in 0..30usize {
        let r = rs[trial % 4];
        let np = random_mod_r_presentation(&mut rng, r);
        let pres = &np.presentation;
        let (h, images) = cokernel(&pres.abelianized_matrix(), pres.num_generators).unwrap();
        for strike in 1..=pres.rank {
            if h.element_order(&images[strike - 1]).is_none() {
                match check_mod_r_theorem(&np, r, strike) {
                    Ok(rep) => {
                        if rep.verdict != torsionkit::pipeline::Verdict::Equal {
                            println!("trial {trial} r={r} strike {strike}: verdict {:?}", rep.verdict);
                            println!("{}", render_presentation(&np));
                        }
                    }
                    Err(e) => {
                        println!("trial {trial} r={r} strike {strike}: ERR {e}");
                        println!("{}", render_presentation(&np));
                    }
                }
            }
        }
    }
    println!("done");
}
