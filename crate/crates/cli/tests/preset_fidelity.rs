use superrad_cli::{preset, run_scenario, RunOutput};
use superrad_core::{classify_crossing, CrossingKind, DEFAULT_AVOIDED_CROSSING_GAP};

fn run(name: &str) -> RunOutput {
    run_scenario(&preset(name).unwrap()).unwrap()
}

fn col(out: &RunOutput, name: &str) -> Vec<f64> {
    out.column(name).unwrap_or_else(|| panic!("missing column {name}: {:?}", out.columns))
}

fn rate_columns(out: &RunOutput, model: &str) -> Vec<Vec<f64>> {
    let mut cols = Vec::new();
    for k in 0.. {
        match out.column(&format!("rate_{k}_{model}")) {
            Some(c) => cols.push(c),
            None => break,
        }
    }
    cols
}

/// Per row, the largest gap between the sorted rate spectra of the models.
fn row_discrepancy(out: &RunOutput) -> Vec<f64> {
    let (e, r) = (rate_columns(out, "exact"), rate_columns(out, "rwa"));
    assert!(!e.is_empty() && e.len() == r.len());
    (0..out.params.len())
        .map(|row| {
            let sorted = |cols: &[Vec<f64>]| {
                let mut v: Vec<f64> = cols.iter().map(|c| c[row]).collect();
                v.sort_by(f64::total_cmp);
                v
            };
            sorted(&e)
                .iter()
                .zip(sorted(&r))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

fn first_drop(x: &[f64], f: &[f64]) -> Option<f64> {
    (1..x.len())
        .find(|&k| f[k - 1] > 0.0 && f[k] <= 0.0)
        .map(|k| x[k - 1] + f[k - 1] / (f[k - 1] - f[k]) * (x[k] - x[k - 1]))
}

#[test]
fn fig2_scalar_ten_percent_point() {
    let out = run("fig2");
    let (re_e, im_e) = (col(&out, "re_J_exact"), col(&out, "im_J_exact"));
    let (re_r, im_r) = (col(&out, "re_J_rwa"), col(&out, "im_J_rwa"));
    let rel: Vec<f64> = (0..out.params.len())
        .map(|k| {
            let e = num(re_e[k], im_e[k]);
            let r = num(re_r[k], im_r[k]);
            ((r - e) / e).re - 0.1
        })
        .collect();
    let s = first_drop(&out.params, &rel).unwrap();
    assert!((0.85..=0.89).contains(&s), "10% point at {s}");
}

fn num(re: f64, im: f64) -> superrad_core::C64 {
    superrad_core::C64::new(re, im)
}

#[test]
fn fig3a_columns_and_range() {
    let out = run("fig3a");
    assert_eq!(out.columns, ["re_ratio_rwa@xx", "re_ratio_rwa@zz"]);
    assert_eq!((out.params[0], *out.params.last().unwrap()), (0.05, 6.0));
    for c in ["re_ratio_rwa@xx", "re_ratio_rwa@zz"] {
        let v = col(&out, c);
        assert!(v[0] > 0.45 && v[0] < 0.55, "{c} starts at {}", v[0]);
    }
}

#[test]
fn fig3b_near_field_factor_half() {
    let out = run("fig3b");
    assert_eq!(out.params[0], 1e-3);
    for c in ["re_ratio_rwa@xx", "re_ratio_rwa@zz"] {
        let v = col(&out, c)[0];
        assert!((0.495..=0.505).contains(&v), "{c} = {v}");
    }
    let m = col(&out, "mag2_ratio_rwa@xx")[0];
    assert!((m - 0.25).abs() < 0.005, "mag2 ratio at s = 0.001: {m}");
}

// The location of this minimum sits well below the published one; the
// acceptance suite keeps that check and reports it as failing. Here the
// preset is held to the same value the library gives on a dense grid.
#[test]
fn fig3b_squared_ratio_dip() {
    let out = run("fig3b");
    let m = col(&out, "mag2_ratio_rwa@xx");
    let window: Vec<usize> = (0..m.len())
        .filter(|&k| (0.3..=1.5).contains(&out.params[k]))
        .collect();
    let k = *window.iter().min_by(|&&a, &&b| m[a].total_cmp(&m[b])).unwrap();
    assert!(m[k] < 0.25, "dip value {}", m[k]);
    assert!((out.params[k] - 0.518).abs() < 0.02, "dip at {}", out.params[k]);
}

#[test]
fn fig4_imaginary_parts_agree() {
    for name in ["fig4a", "fig4b"] {
        let out = run(name);
        let (e, r) = (col(&out, "im_J_exact"), col(&out, "im_J_rwa"));
        let worst = e.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-10, "{name}: {worst}");
    }
}

#[test]
fn fig4_strong_coupling_edges() {
    for (name, want) in [("fig4a", 1.10), ("fig4b", 1.67)] {
        let out = run(name);
        let f: Vec<f64> = col(&out, "re_J_exact").iter().map(|j| j.abs() - 1.0).collect();
        let s = first_drop(&out.params, &f).unwrap();
        assert!((s - want).abs() <= 0.05, "{name}: edge at {s}");
    }
}

#[test]
fn fig5a_detuned_pair_error() {
    let out = run("fig5a");
    let d = row_discrepancy(&out);
    let k = argmax(&d);
    assert!((0.20..=0.30).contains(&d[k]), "max {}", d[k]);
    assert!((0.3..=3.0).contains(&out.params[k]), "at delta {}", out.params[k]);
}

#[test]
fn fig5b_error_vanishes_at_both_ends() {
    let out = run("fig5b");
    let d = row_discrepancy(&out);
    let k = argmax(&d);
    assert!(d[k] > 0.05);
    assert!(k > 0 && k < d.len() - 1);
    assert!(d[0] < 0.2 * d[k] && *d.last().unwrap() < 0.05 * d[k]);
}

#[test]
fn fig6_rotated_triangle_error() {
    for name in ["fig6b", "fig6c"] {
        let out = run(name);
        assert_eq!(rate_columns(&out, "exact").len(), 3);
        let d = row_discrepancy(&out);
        let k = argmax(&d);
        assert!(d[k] > 0.30 && out.params[k] < 1.0, "{name}: {} at {}", d[k], out.params[k]);
    }
}

#[test]
fn fig7_crossing_topology() {
    let out = run("fig7");
    let mut found = (false, false, false);
    for t in &out.tracked {
        let model = if t.model == superrad_cli::config::ModelChoice::Exact { "exact" } else { "rwa" };
        for (k, b) in t.branches.iter().enumerate() {
            assert_eq!(col(&out, &format!("rate_{k}_{model}")), b.rates());
        }
        for i in 0..t.branches.len() {
            for j in i + 1..t.branches.len() {
                let r = classify_crossing(&t.branches[i], &t.branches[j], DEFAULT_AVOIDED_CROSSING_GAP).unwrap();
                let near = |c: f64, w: f64| r.location.is_some_and(|x| (x - c).abs() <= w);
                match (model, r.kind) {
                    ("rwa", CrossingKind::Crossing) if near(0.7, 0.15) => found.0 = true,
                    ("exact", CrossingKind::AvoidedCrossing) if near(1.0, 0.2) => found.1 = true,
                    ("exact", CrossingKind::Crossing) => found.2 = true,
                    _ => {}
                }
            }
        }
    }
    assert_eq!(found, (true, true, false));
}

#[test]
fn ring_rates_ignore_the_model() {
    let out = run("ring6");
    assert_eq!(rate_columns(&out, "rwa").len(), 6);
    let d = row_discrepancy(&out);
    assert!(d.iter().all(|&x| x < 1e-9), "{}", d[argmax(&d)]);
}

#[test]
fn symmetric_triangle_rates_ignore_the_model() {
    let d = row_discrepancy(&run("triangle"));
    assert!(d.iter().all(|&x| x < 1e-10));
}

#[test]
fn collinear_rates_depend_on_the_model() {
    let d = row_discrepancy(&run("line3"));
    assert!(d[argmax(&d)] > 1e-3);
}

#[test]
fn rates_sum_to_emitter_count() {
    for (name, n) in [("fig5a", 2.0), ("fig7", 3.0), ("ring6", 6.0)] {
        let out = run(name);
        for model in ["exact", "rwa"] {
            let cols = rate_columns(&out, model);
            for row in 0..out.params.len() {
                let sum: f64 = cols.iter().map(|c| c[row]).sum();
                assert!((sum - n).abs() < 1e-8, "{name} {model} row {row}: {sum}");
            }
        }
    }
}

#[test]
fn spectrum_peaks_sit_near_the_pair_shifts() {
    let out = run("spectrum_xx");
    let spec = col(&out, "spectrum_exact");
    let w = &out.params;
    let left = (0..w.len()).filter(|&k| w[k] < 0.0).max_by(|&a, &b| spec[a].total_cmp(&spec[b])).unwrap();
    let right = (0..w.len()).filter(|&k| w[k] > 0.0).max_by(|&a, &b| spec[a].total_cmp(&spec[b])).unwrap();
    assert!((w[left] + w[right]).abs() < 0.2, "{} {}", w[left], w[right]);
    assert!(w[right] > 1.0);
}
