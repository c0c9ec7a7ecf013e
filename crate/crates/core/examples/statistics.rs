//! One-way ANOVA and two-sample t-tests on the samples given as
//! comma-separated groups.
//!
//!     cargo run --example statistics -- 1,2,3 2,3,4 3,4,5

use linkage_opt::bench::stats::summarize;
use linkage_opt::bench::{one_way_anova, two_sample_t};

fn main() -> linkage_opt::Result<()> {
    let mut groups: Vec<Vec<f64>> = std::env::args()
        .skip(1)
        .map(|g| g.split(',').map(|x| x.trim().parse().expect("number")).collect())
        .collect();
    if groups.is_empty() {
        groups = vec![vec![31.53, 31.50, 31.49], vec![31.63, 31.58, 31.61, 31.55], vec![31.65, 31.64, 31.66]];
    }
    for (i, g) in groups.iter().enumerate() {
        if let Some(s) = summarize(g) {
            println!("group {i}: n {}  mean {:.4}  std {:.4}  median {:.4}  IQR {:.4}", s.n, s.mean, s.std, s.median, s.iqr);
        }
    }
    let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
    let a = one_way_anova(&refs)?;
    println!(
        "ANOVA: SSB {:.4}  SSW {:.4}  F({}, {}) = {:.4}  p = {:.3e}  eta² = {:.4}",
        a.ss_between, a.ss_within, a.df_between, a.df_within, a.f, a.p, a.eta_squared
    );
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let p = two_sample_t(&groups[i], &groups[j], false)?;
            let w = two_sample_t(&groups[i], &groups[j], true)?;
            println!(
                "{i} vs {j}: pooled t({}) = {:.4}, p = {:.3e};  Welch t({:.1}) = {:.4}, p = {:.3e}",
                p.df, p.t, p.p, w.df, w.t, w.p
            );
        }
    }
    Ok(())
}
