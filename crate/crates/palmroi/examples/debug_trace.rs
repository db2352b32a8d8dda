//! Scratch harness: key-point accuracy over random RST draws.

use palmroi::pipeline::{run_pipeline, PipelineConfig, ReportStatus};
use palmroi::synth::{generate_hand, sample_params, sample_rst, GestureClass};
use rand::SeedableRng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let class = match args.get(1).map(|s| s.as_str()) {
        Some("closed") => GestureClass::Closed,
        Some("thumb") => GestureClass::Thumb,
        Some("varied") => GestureClass::Varied,
        _ => GestureClass::Open,
    };
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(40);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let cfg = PipelineConfig::default();

    let mut ok = 0;
    let mut fail_stage = std::collections::BTreeMap::<String, usize>::new();
    let mut worst: f64 = 0.0;
    let mut errs = Vec::new();
    let start = std::time::Instant::now();
    for i in 0..n {
        let (rot, scale, trans) = sample_rst(&mut rng, (0.6, 1.4), 0.15, 640, 480);
        let params = sample_params(class, &mut rng).with_rst(rot, scale, trans);
        let (img, gt) = match generate_hand(&params, 640, 480) {
            Ok(v) => v,
            Err(e) => {
                *fail_stage.entry(format!("generate: {e}")).or_default() += 1;
                continue;
            }
        };
        let out = run_pipeline(&img, &cfg);
        match &out.report.status {
            ReportStatus::Ok => {
                let kps = out.report.key_points.unwrap();
                // Selected keypoints should match the non-thumb valleys:
                // first three GT valleys (left to right).
                let hand_scale = out
                    .intermediates
                    .mask
                    .as_ref()
                    .unwrap()
                    .bbox_longer_side()
                    .unwrap();
                let tol = (0.01 * hand_scale).max(2.0);
                let mut case_worst: f64 = 0.0;
                for kp in kps.iter() {
                    let gtv = gt.valley_points[kp.valley_index];
                    case_worst = case_worst.max(kp.position.distance(gtv));
                }
                worst = worst.max(case_worst);
                errs.push(case_worst);
                if case_worst <= tol {
                    ok += 1;
                } else {
                    println!(
                        "case {i}: err {case_worst:.2} > tol {tol:.2} (rot {rot:.0} scale {scale:.2})"
                    );
                }
            }
            ReportStatus::Error { stage, code, .. } => {
                *fail_stage.entry(format!("{stage}: {code}")).or_default() += 1;
                let inter = &out.intermediates;
                let hand_scale = inter
                    .mask
                    .as_ref()
                    .and_then(|m| m.bbox_longer_side())
                    .unwrap_or(0.0);
                println!(
                    "case {i}: FAILED {stage}/{code} (rot {rot:.0} scale {scale:.2}) \
                     fitted {} connected {} long {} pairs {} handscale {hand_scale:.0}",
                    inter.fitted.as_ref().map_or(0, |v| v.len()),
                    inter.connected.as_ref().map_or(0, |v| v.len()),
                    inter.long_segments.as_ref().map_or(0, |v| v.len()),
                    inter.pairs.as_ref().map_or(0, |v| v.len()),
                );
                // Evaluate every pairing condition on each true pair.
                if let Some(longs) = &inter.long_segments {
                    for (f, (left, right)) in gt.finger_edge_lines.iter().enumerate() {
                        let pick = |line: &palmroi::geom::Line| {
                            longs
                                .iter()
                                .filter(|s| {
                                    palmroi::geom::axial_angle(s.direction(), line.dir)
                                        .to_degrees()
                                        < 4.0
                                        && line.distance(s.midpoint()) < 4.0
                                })
                                .max_by(|x, y| {
                                    x.length().partial_cmp(&y.length()).unwrap()
                                })
                                .copied()
                        };
                        let (Some(a), Some(b)) = (pick(left), pick(right)) else {
                            println!("    finger {f}: edge missing");
                            continue;
                        };
                        let angle = palmroi::geom::axial_angle(a.direction(), b.direction())
                            .to_degrees();
                        let axis = {
                            let da = a.direction();
                            let mut db = b.direction();
                            if da.dot(db) < 0.0 {
                                db = -db;
                            }
                            (da + db).normalized()
                        };
                        let sep = (b.midpoint() - a.midpoint()).dot(axis.perp()).abs();
                        let ia = (axis.dot(a.p0), axis.dot(a.p1));
                        let ib = (axis.dot(b.p0), axis.dot(b.p1));
                        let (a0, a1) = (ia.0.min(ia.1), ia.0.max(ia.1));
                        let (b0, b1) = (ib.0.min(ib.1), ib.0.max(ib.1));
                        let ovl = (a1.min(b1) - a0.max(b0)).max(0.0)
                            / a.length().min(b.length());
                        println!(
                            "    finger {f}: angle {angle:.1} sep {sep:.1} ({:.3} of {hand_scale:.0}) ovl {ovl:.2} lens {:.0}/{:.0}",
                            sep / hand_scale,
                            a.length(),
                            b.length()
                        );
                    }
                }
            }
        }
    }
    errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!(
        "class {class:?}: {ok}/{n} within tol, worst err {worst:.2}, median {:.2}, elapsed {:.1}s",
        errs.get(errs.len() / 2).copied().unwrap_or(f64::NAN),
        start.elapsed().as_secs_f64()
    );
    for (k, v) in fail_stage {
        println!("  failures {k}: {v}");
    }
}
