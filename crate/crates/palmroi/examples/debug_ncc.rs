//! Scratch harness: ROI consistency between identity and RST renders.

use palmroi::pipeline::{run_pipeline, PipelineConfig};
use palmroi::roi::roi_similarity;
use palmroi::synth::{generate_hand, sample_params, sample_rst, GestureClass};
use rand::SeedableRng;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let cfg = PipelineConfig::default();
    let mut scores = Vec::new();
    let mut failures = 0;
    let start = std::time::Instant::now();
    for i in 0..n {
        let params = sample_params(GestureClass::Varied, &mut rng);
        let (rot, scale, trans) = sample_rst(&mut rng, (0.6, 1.4), 0.15, 640, 480);
        let moved = params.clone().with_rst(rot, scale, trans);
        let (img_a, _) = generate_hand(&params, 640, 480).unwrap();
        let (img_b, _) = generate_hand(&moved, 640, 480).unwrap();
        let out_a = run_pipeline(&img_a, &cfg);
        let out_b = run_pipeline(&img_b, &cfg);
        match (out_a.roi, out_b.roi) {
            (Some(a), Some(b)) => {
                let s = roi_similarity(&a, &b).unwrap();
                if s < 0.9 {
                    let idx = |o: &palmroi::pipeline::PipelineOutput| {
                        o.report
                            .key_points
                            .map(|k| [k[0].valley_index, k[1].valley_index, k[2].valley_index])
                    };
                    println!(
                        "case {i}: NCC {s:.3} (rot {rot:.0} scale {scale:.2}) triples {:?} vs {:?} scales {:.1} vs {:.1}",
                        idx(&out_a),
                        idx(&out_b),
                        out_a.report.frame.map(|f| f.scale).unwrap_or(0.0),
                        out_b.report.frame.map(|f| f.scale).unwrap_or(0.0) / scale,
                    );
                }
                scores.push(s);
            }
            _ => {
                failures += 1;
                println!(
                    "case {i}: pipeline failed ({:?} / {:?})",
                    out_a.report.status, out_b.report.status
                );
            }
        }
    }
    scores.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ge90 = scores.iter().filter(|&&s| s >= 0.9).count();
    println!(
        "pairs {} | >=0.90: {} | median {:.3} | min {:.3} | pipeline failures {failures} | {:.1}s",
        scores.len(),
        ge90,
        scores.get(scores.len() / 2).copied().unwrap_or(f64::NAN),
        scores.first().copied().unwrap_or(f64::NAN),
        start.elapsed().as_secs_f64()
    );
}
