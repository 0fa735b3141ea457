//! Scratch probe for acceptance-band measurements. Not part of the library.

use epi_core::{
    simulate_sir_with_policy, validate_params, BehavioralParams, ContactBasis, DensityMode,
    OutbreakMode, SirParams,
};
use epi_engine::{replicate, summarize_peak, BehaviorMode, ReplicateSummary, ScenarioSpec, TraceDetail};

fn spec(id: &str) -> ScenarioSpec {
    ScenarioSpec { scenario_id: id.into(), trace: TraceDetail::Light, ..Default::default() }
}

fn seeds(k: u64) -> Vec<u64> {
    (1..=k).collect()
}

struct Report {
    id: String,
    n: f64,
    summary: ReplicateSummary,
}

impl Report {
    fn new(s: &ScenarioSpec, k: u64) -> Self {
        let t0 = std::time::Instant::now();
        let summary = replicate(s, &seeds(k)).unwrap();
        let n = s.params.n_agents as f64;
        eprintln!("[{}] {:.1}s", s.scenario_id, t0.elapsed().as_secs_f64());
        Self { id: s.scenario_id.clone(), n, summary }
    }

    fn mean_i_frac(&self) -> Vec<f64> {
        self.summary.mean.iter().map(|d| d.i / self.n).collect()
    }

    fn print(&self) {
        let st = &self.summary.stats;
        let (pd, pv) = summarize_peak(&self.mean_i_frac()).unwrap();
        let cum_at_peak = {
            let m = &self.summary.mean[pd as usize];
            (m.i + m.r) / self.n
        };
        let r0 = st.r0_hat.map(|s| s.mean).unwrap_or(f64::NAN);
        println!(
            "{:8} final={:.4}(sd {:.4}) seedpeak={:.4}@{:<5.1} meanpeak={:.4}@{} cum@peak={:.4} r0_hat={:.3}",
            self.id, st.final_size.mean, st.final_size.sd, st.peak_i_frac.mean,
            st.peak_day.mean, pv, pd, cum_at_peak, r0
        );
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    let get = |s: &[f64], t: usize| s.get(t).copied().unwrap_or_else(|| *s.last().unwrap());
    (0..len).map(|t| (get(a, t) - get(b, t)).abs()).fold(0.0, f64::max)
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".into());
    let k20 = 20;

    // Baseline clustered city.
    let base = spec("base");

    if which == "all" || which == "c34" {
        let b = Report::new(&base, k20);
        let mut rnd = spec("random");
        rnd.geography.outbreak_mode = OutbreakMode::Random;
        let r = Report::new(&rnd, k20);
        b.print();
        r.print();
        let day_ratio = b.summary.stats.peak_day.mean / r.summary.stats.peak_day.mean;
        let final_gap = (b.summary.stats.final_size.mean - r.summary.stats.final_size.mean).abs();
        println!("C4: day_ratio={:.3} (band 1.4..2.8)  final_gap={:.4} (<0.02)", day_ratio, final_gap);
    }

    if which == "all" || which == "c5" {
        let b = Report::new(&base, k20);
        let mut q = spec("quarter");
        q.params.n_agents = 6_650;
        q.geography.city_side = 0.5;
        
        let q = Report::new(&q, k20);
        let mut x4 = spec("x4");
        x4.params.n_agents = 106_400;
        x4.geography.city_side = 2.0;
        
        let x4 = Report::new(&x4, k20);
        let mut fc = spec("fourclu");
        fc.params.n_agents = 106_400;
        fc.params.initial_infected = 120;
        fc.geography.city_side = 2.0;
        fc.geography.outbreak_mode = OutbreakMode::SymmetricClusters { k: 4 };
        let fc = Report::new(&fc, k20);
        q.print();
        x4.print();
        fc.print();
        println!(
            "C5: quarter meanpeak band 0.196..0.364 day 16.1..29.9; x4 band 0.049..0.091 day 72.8..135.2; sup(fourclu, base)={:.4} (<0.03)",
            sup_diff(&fc.mean_i_frac(), &b.mean_i_frac())
        );
    }

    if which == "all" || which == "c6" {
        let mut d2 = spec("dens2");
        d2.geography.city_side = 1.0 / 2.0_f64.sqrt();
        let d2 = Report::new(&d2, k20);
        let mut dh = spec("dens05");
        dh.geography.city_side = 2.0_f64.sqrt();
        let dh = Report::new(&dh, k20);
        d2.print();
        dh.print();
        let s2 = &d2.summary.stats;
        let s5 = &dh.summary.stats;
        let (pd2, pv2) = summarize_peak(&d2.mean_i_frac()).unwrap();
        let (pd5, pv5) = summarize_peak(&dh.mean_i_frac()).unwrap();
        println!(
            "C6: finals={:.3} (1.21..1.41) peaks(seed)={:.2} peaks(mean)={:.2} (5.08..9.43) days(seed)={:.2} days(mean)={:.2} (3.78..7.02)",
            s2.final_size.mean / s5.final_size.mean,
            s2.peak_i_frac.mean / s5.peak_i_frac.mean,
            pv2 / pv5,
            s5.peak_day.mean / s2.peak_day.mean,
            pd5 as f64 / pd2 as f64
        );
    }

    if which == "all" || which == "c7" {
        let b = Report::new(&base, k20);
        let mut p6 = spec("pi6d6");
        p6.params.contagion_prob = 0.054 * 6.0;
        p6.geography.city_side = 6.0_f64.sqrt();
        let p6 = Report::new(&p6, k20);
        b.print();
        p6.print();
        println!("C7: sup={:.4} (>0.02)", sup_diff(&p6.mean_i_frac(), &b.mean_i_frac()));
    }

    if which == "all" || which == "c8" {
        let b = Report::new(&base, k20);
        let mut het = spec("het");
        het.geography.density_mode = DensityMode::Heterogeneous;
        het.geography.outbreak_mode = OutbreakMode::Cluster { anchor: (0.5, 0.5) };
        let het = Report::new(&het, k20);
        b.print();
        het.print();
        let (pdb, _) = summarize_peak(&b.mean_i_frac()).unwrap();
        let (pdh, _) = summarize_peak(&het.mean_i_frac()).unwrap();
        println!("C8: het peaks earlier? {} vs {} | cum@peak het band 0.30..0.50, base band 0.60..0.80", pdh, pdb);
    }

    if which == "all" || which == "c9" {
        let b = Report::new(&base, k20);
        let mut m0 = spec("mu0");
        m0.params.move_distance = 0.0;
        let m0 = Report::new(&m0, k20);
        let mut m02 = spec("mu02");
        m02.params.move_distance = 0.034 * 0.2;
        let m02 = Report::new(&m02, k20);
        b.print();
        m0.print();
        m02.print();
        println!(
            "C9: mu0 final {:.4} vs base {:.4} (lower by >=0.05); mu02 peakday {:.1} > base {:.1}",
            m0.summary.stats.final_size.mean,
            b.summary.stats.final_size.mean,
            m02.summary.stats.peak_day.mean,
            b.summary.stats.peak_day.mean
        );
    }

    if which == "all" || which == "c10" {
        let bp = BehavioralParams::default();
        let mut bg = spec("behglob");
        bg.behavior = BehaviorMode::Global(bp);
        let bg = Report::new(&bg, k20);
        let mut bl = spec("behloc");
        bl.behavior = BehaviorMode::Local(bp);
        let bl = Report::new(&bl, k20);
        bg.print();
        bl.print();
        // Mean-field benchmark with the same response, both contact bases.
        for basis in [ContactBasis::Survey, ContactBasis::Analytic] {
            let c = basis.daily_contacts(26_600.0, 0.013);
            let params = SirParams::contact_binomial(0.054, c, 0.154, 26_600.0);
            let states = simulate_sir_with_policy(&params, 30.0, 600, Some(&bp), None).unwrap();
            let peak = states.iter().map(|s| s.i / 26_600.0).fold(0.0, f64::max);
            let iso_peak = states
                .iter()
                .map(|s| 1.0 - epi_core::alpha_response(s.i / 26_600.0, &bp))
                .fold(0.0, f64::max);
            let (pg, vg) = summarize_peak(&bg.mean_i_frac()).unwrap();
            let iso_g_peak = bg
                .summary
                .mean
                .iter()
                .map(|d| d.isolated_share)
                .fold(0.0, f64::max);
            println!(
                "C10[{:?}]: SIRpeak={:.4} spatial meanpeak={:.4}@{} ratio={:.3} (0.2..0.5); iso peaks SIR={:.4} spatial={:.4} ratio={:.3} (0.533..0.8)",
                basis, peak, vg, pg, vg / peak, iso_peak, iso_g_peak, iso_g_peak / iso_peak
            );
        }
        let iso = |r: &Report| -> Vec<f64> {
            r.summary.mean.iter().map(|d| d.isolated_share).collect()
        };
        let (il, ig) = (iso(&bl), iso(&bg));
        let sum_l: f64 = il.iter().sum();
        let sum_g: f64 = ig.iter().sum();
        let active: Vec<usize> = (0..ig.len()).filter(|&t| ig[t] > 0.0).collect();
        let (lo, hi) = (*active.first().unwrap(), *active.last().unwrap());
        let win_l: f64 = (lo..=hi).map(|t| il.get(t).copied().unwrap_or(0.0)).sum();
        let win_g: f64 = (lo..=hi).map(|t| ig[t]).sum();
        println!(
            "C10 local: integral ratio={:.3} (sum {:.2}/{:.2}); global-active window d{}..{} ratio={:.3}; sup i diff={:.4} (<0.05)",
            sum_l / sum_g, sum_l, sum_g, lo, hi, win_l / win_g,
            sup_diff(&bl.mean_i_frac(), &bg.mean_i_frac())
        );
        for t in (10..=160).step_by(10) {
            let (l, g) = (il.get(t).copied().unwrap_or(0.0), ig.get(t).copied().unwrap_or(0.0));
            println!("  day {:3}: loc={:.4} glob={:.4} ratio={}", t, l, g,
                if g > 0.0 { format!("{:.2}", l / g) } else { "-".into() });
        }
    }

    if which == "all" || which == "c11" {
        println!("C11 beta-hat by density (growth ~ s_frac with intercept, days<=80, 5 seeds):");
        for d_rel in [0.5_f64, 0.75, 1.0, 1.25, 1.5] {
            let side = 1.0 / d_rel.sqrt();
            let mut s = spec(&format!("d{}", d_rel));
            s.params.horizon = 120;
            s.geography.city_side = side;
            let rep = replicate(&s, &seeds(5)).unwrap();
            // Forward growth (I[t+1] - I[t]) / I[t] against S[t]/N, days 0..79.
            let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0_f64, 0.0, 0.0, 0.0, 0.0);
            for t in &rep.traces {
                for w in t.records.windows(2) {
                    let (cur, next) = (&w[0], &w[1]);
                    if cur.day >= 80 || cur.i == 0 {
                        continue;
                    }
                    let x = cur.s as f64 / 26_600.0;
                    let y = (next.i as f64 - cur.i as f64) / cur.i as f64;
                    n += 1.0;
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                }
            }
            let beta_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            let icept = (sy - beta_hat * sx) / n;
            let checked = validate_params(&s.params, &s.geography).unwrap();
            let beta_survey =
                0.054 * ContactBasis::Survey.daily_contacts(checked.derived.density, 0.013);
            println!(
                "  d={:<5} obs={:4} beta_hat={:.4} icept={:+.4} | analytic={:.4} ratio={:.3} | survey={:.4} ratio={:.3}",
                d_rel,
                n,
                beta_hat,
                icept,
                checked.derived.beta,
                beta_hat / checked.derived.beta,
                beta_survey,
                beta_hat / beta_survey
            );
        }
        println!("C11: ratios non-increasing; at d=1.5 ratio in 0.4..0.65");
    }

    if which == "c11seeds" {
        // Per-seed slope dispersion at the wiggly middle densities.
        for d_rel in [0.75_f64, 1.0, 1.25] {
            let side = 1.0 / d_rel.sqrt();
            let mut s = spec(&format!("d{}", d_rel));
            s.params.horizon = 120;
            s.geography.city_side = side;
            for group in [1u64, 6, 11] {
                let ss: Vec<u64> = (group..group + 5).collect();
                let rep = replicate(&s, &ss).unwrap();
                let mut per_seed = Vec::new();
                let mut pooled = (0.0_f64, 0.0, 0.0, 0.0, 0.0);
                for t in &rep.traces {
                    let (mut n, mut sx, mut sy, mut sxx, mut sxy) =
                        (0.0_f64, 0.0, 0.0, 0.0, 0.0);
                    for w in t.records.windows(2) {
                        let (cur, next) = (&w[0], &w[1]);
                        if cur.day >= 80 || cur.i == 0 {
                            continue;
                        }
                        let x = cur.s as f64 / 26_600.0;
                        let y = (next.i as f64 - cur.i as f64) / cur.i as f64;
                        n += 1.0;
                        sx += x;
                        sy += y;
                        sxx += x * x;
                        sxy += x * y;
                    }
                    per_seed.push((n * sxy - sx * sy) / (n * sxx - sx * sx));
                    pooled.0 += n;
                    pooled.1 += sx;
                    pooled.2 += sy;
                    pooled.3 += sxx;
                    pooled.4 += sxy;
                }
                let (n, sx, sy, sxx, sxy) = pooled;
                let b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                let beta = 0.054 * 14.122_652 * d_rel;
                let ratios: Vec<String> =
                    per_seed.iter().map(|v| format!("{:.3}", v / beta)).collect();
                println!(
                    "  d={:<5} seeds {:2}..{:2} pooled ratio={:.3} per-seed [{}]",
                    d_rel,
                    group,
                    group + 4,
                    b / beta,
                    ratios.join(", ")
                );
            }
        }
    }
}
