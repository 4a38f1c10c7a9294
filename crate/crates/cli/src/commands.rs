use std::collections::BTreeMap;
use std::f64::consts::PI;

use qpke_core::bayes::{self, BayesAttack};
use qpke_core::montecarlo::{analytic_success, estimate};
use qpke_core::parity::parity_closed_form;
use qpke_core::symmetry::{average_success_symmetry, forward_search_length, forward_search_success};
use qpke_core::symspace::{
    critical_n, eigendecompose, holevo_bound_loose, holevo_bound_tight, prior_density, DEFAULT_CRITICAL_TOLERANCE,
};
use qpke_core::{AttackKind, PairBasis, ProtocolParams, TrialConfig};
use serde::Serialize;

use crate::args::{AttackArg, SweepArgs};
use crate::table::{Table, Value};
use crate::CliError;

/// A failed inequality, reported on stderr as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct Checks {
    pub evaluated: usize,
    pub violations: Vec<Violation>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.evaluated += 1;
        if !ok {
            self.violations.push(Violation { check: name.to_owned(), detail: detail() });
        }
    }

    fn absorb(&mut self, other: Checks) {
        self.evaluated += other.evaluated;
        self.violations.extend(other.violations);
    }
}

#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub checks: Checks,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(table: Table, checks: Checks) -> Self {
        Self { table, checks, warnings: Vec::new() }
    }
}

fn as_u32(name: &str, x: u64) -> Result<u32, CliError> {
    u32::try_from(x).map_err(|_| CliError::Usage(format!("--{name} value {x} is too large")))
}

fn as_usize(name: &str, x: u64) -> Result<usize, CliError> {
    usize::try_from(x).map_err(|_| CliError::Usage(format!("--{name} value {x} is too large")))
}

fn peak_to_peak(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn prior(args: &SweepArgs) -> Result<Report, CliError> {
    let taus = args.tau_or(&(1..=16).collect::<Vec<_>>())?;
    let ns = args.n_or(&(1..=10).collect::<Vec<_>>())?;
    let mut table = Table::new(&[
        "tau",
        "n",
        "n_c",
        "at_or_above_n_c",
        "rank",
        "full_rank",
        "entropy",
        "holevo_loose",
        "holevo_tight",
        "max_odd_entry",
        "spectrum",
    ]);
    let mut checks = Checks::default();
    for &tau in &taus {
        let tau = as_usize("tau", tau)?;
        let nc = critical_n(tau, DEFAULT_CRITICAL_TOLERANCE)?.n_c;
        for &n in &ns {
            let n = as_u32("n", n)?;
            let rho = prior_density(tau, n)?;
            let spec = eigendecompose(&rho)?;
            let entropy = spec.entropy();
            let (loose, tight) = (holevo_bound_loose(tau), holevo_bound_tight(tau));
            let above = nc.is_some_and(|c| n >= c);
            checks.check("prior entropy <= log2(tau+1)", entropy <= loose + 1e-9, || {
                format!("tau={tau} n={n}: S={entropy} bound={loose}")
            });
            if above {
                checks.check("prior entropy <= Gaussian bound", entropy <= tight + 1e-9, || {
                    format!("tau={tau} n={n}: S={entropy} bound={tight}")
                });
            }
            let odd = rho.max_odd_parity_entry();
            checks.check("odd-parity entries vanish", odd < 1e-12, || format!("tau={tau} n={n}: {odd:e}"));
            table.push(vec![
                tau.into(),
                n.into(),
                nc.into(),
                above.into(),
                spec.rank.into(),
                (spec.rank == tau + 1).into(),
                entropy.into(),
                loose.into(),
                tight.into(),
                odd.into(),
                spec.eigenvalues.clone().into(),
            ]);
        }
    }
    Ok(Report::new(table, checks))
}

pub fn figure(id: u8, args: &SweepArgs) -> Result<Report, CliError> {
    match id {
        1 => posterior_grids(args),
        2 => information_vs_copies(args),
        3 => success_vs_key(args),
        4 => success_vs_copies(args),
        5 => codeword_success_vs_length(args),
        other => Err(CliError::Usage(format!("no figure {other}; ids are 1..5"))),
    }
}

fn posterior_grids(args: &SweepArgs) -> Result<Report, CliError> {
    let n = single_n(args)?;
    let mut table = Table::new(&[
        "t",
        "n",
        "zeros_z",
        "zeros_x",
        "evidence",
        "posterior_sum",
        "bloch_z",
        "bloch_x",
        "bloch_norm",
        "posterior",
    ]);
    let mut checks = Checks::default();
    for t in args.t_or(&[8, 9])? {
        let t = as_u32("T", t)?;
        let attack = BayesAttack::new(t, n)?;
        for o in attack.outcomes() {
            let q = attack.evidence(o)?;
            let mut row: Vec<Value> = vec![t.into(), n.into(), o.zeros_z.into(), o.zeros_x.into(), q.into()];
            if q > 0.0 {
                let post = attack.posterior(o)?;
                let sum: f64 = post.probs().iter().sum();
                checks.check("posterior sums to one", (sum - 1.0).abs() <= 1e-12, || {
                    format!("t={t} n={n} outcome=({}, {}): {sum}", o.zeros_z, o.zeros_x)
                });
                let r = bayes::bloch_estimate(&post);
                row.extend([sum.into(), r.z.into(), r.x.into(), r.norm.into(), post.probs().to_vec().into()]);
            } else {
                row.extend([Value::Empty, Value::Empty, Value::Empty, Value::Empty, Value::Empty]);
            }
            table.push(row);
        }
    }
    Ok(Report::new(table, checks))
}

fn single_n(args: &SweepArgs) -> Result<u32, CliError> {
    match args.n_or(&[10])?.as_slice() {
        [n] => as_u32("n", *n),
        _ => Err(CliError::Usage("--n takes a single value for this command".into())),
    }
}

fn information_vs_copies(args: &SweepArgs) -> Result<Report, CliError> {
    let mut table = Table::new(&[
        "n",
        "two_t",
        "t",
        "key_entropy",
        "prior_entropy",
        "holevo_loose",
        "holevo_tight",
        "information_gain",
        "gap",
    ]);
    let mut checks = Checks::default();
    for n in args.n_or(&[10])? {
        let n = as_u32("n", n)?;
        for t in args.t_or(&(1..=8).collect::<Vec<_>>())? {
            let t = as_u32("T", t)?;
            let tau = 2 * t as usize;
            let gain = BayesAttack::new(t, n)?.information_gain();
            let s_prior = eigendecompose(&prior_density(tau, n)?)?.entropy();
            let tight = holevo_bound_tight(tau);
            let gap = tight - gain;
            checks.check("information gain below Holevo bound", gap > 0.0, || {
                format!("n={n} 2T={tau}: gain={gain} bound={tight}")
            });
            table.push(vec![
                n.into(),
                tau.into(),
                t.into(),
                f64::from(n).into(),
                s_prior.into(),
                holevo_bound_loose(tau).into(),
                tight.into(),
                gain.into(),
                gap.into(),
            ]);
        }
    }
    Ok(Report::new(table, checks))
}

fn success_vs_key(args: &SweepArgs) -> Result<Report, CliError> {
    let n = single_n(args)?;
    let mut table = Table::new(&["t", "n", "k", "angle", "success"]);
    let theta = PI / 2f64.powi(n as i32 - 1);
    for t in args.t_or(&(1..=10).collect::<Vec<_>>())? {
        let t = as_u32("T", t)?;
        for (k, p) in BayesAttack::new(t, n)?.success_by_key().into_iter().enumerate() {
            table.push(vec![t.into(), n.into(), k.into(), (k as f64 * theta).into(), p.into()]);
        }
    }
    Ok(Report::new(table, Checks::default()))
}

fn success_vs_copies(args: &SweepArgs) -> Result<Report, CliError> {
    let n = single_n(args)?;
    let mut table = Table::new(&["t", "n", "mean_success", "bound_u", "optimal_collective", "peak_to_peak"]);
    let mut checks = Checks::default();
    let mut previous: Option<(u32, f64)> = None;
    for t in args.t_or(&(1..=10).collect::<Vec<_>>())? {
        let t = as_u32("T", t)?;
        let by_key = BayesAttack::new(t, n)?.success_by_key();
        let mean = by_key.iter().sum::<f64>() / by_key.len() as f64;
        let p2p = peak_to_peak(&by_key);
        let optimal = bayes::optimal_collective(t)?;
        let u = (t > 1).then(|| bayes::bound_u(t)).transpose()?;
        if let Some(u) = u {
            checks.check("mean success <= 1 - 1/(6T)", mean <= u + 1e-9, || format!("T={t} n={n}: {mean} > {u}"));
        }
        checks.check("mean success <= optimal collective", mean <= optimal + 1e-12, || {
            format!("T={t} n={n}: {mean} > {optimal}")
        });
        if let Some((prev_t, prev)) = previous.filter(|&(pt, _)| pt >= 2 && pt < t) {
            checks.check("oscillation shrinks with T", p2p < prev, || {
                format!("T={prev_t}: {prev:e}, T={t}: {p2p:e}")
            });
        }
        previous = Some((t, p2p));
        table.push(vec![t.into(), n.into(), mean.into(), u.into(), optimal.into(), p2p.into()]);
    }
    Ok(Report::new(table, checks))
}

fn codeword_success_vs_length(args: &SweepArgs) -> Result<Report, CliError> {
    let n = single_n(args)?;
    let mut table = Table::new(&[
        "t",
        "n",
        "s",
        "bit_success",
        "codeword_success",
        "codeword_bound",
        "forward_search",
        "symmetry_test",
    ]);
    let mut checks = Checks::default();
    let lengths = args.s_or(&(1..=50).collect::<Vec<_>>())?;
    for t in args.t_or(&[2, 4, 8])? {
        let t = as_u32("T", t)?;
        let bit = BayesAttack::new(t, n)?.mean_success();
        for &s in &lengths {
            let s = as_usize("s", s)?;
            let got = bayes::codeword_success(bit, s);
            let bound = bayes::codeword_bound(t, s)?;
            checks.check("codeword success below bound", got <= bound + 1e-10, || {
                format!("T={t} s={s}: {got} > {bound}")
            });
            table.push(vec![
                t.into(),
                n.into(),
                s.into(),
                bit.into(),
                got.into(),
                bound.into(),
                forward_search_success(t, s)?.into(),
                average_success_symmetry(s)?.into(),
            ]);
        }
    }
    Ok(Report::new(table, checks))
}

pub fn security(args: &SweepArgs) -> Result<Report, CliError> {
    let mut table = Table::new(&["epsilon", "t", "exponent", "s_exact", "s_simple", "forward_search", "ratio"]);
    let mut checks = Checks::default();
    for eps in args.epsilon_or("2^-3..2^-10")? {
        for t in args.t_or(&(2..=8).collect::<Vec<_>>())? {
            let t = as_u32("T", t)?;
            let lengths = bayes::required_codeword_length(eps, t)?;
            let forward = forward_search_length(eps, t)?;
            checks.check("simple length covers exact length", lengths.simple >= lengths.exact, || {
                format!("eps={eps} T={t}: {} < {}", lengths.simple, lengths.exact)
            });
            let ratio = (forward > 0).then(|| lengths.simple as f64 / forward as f64);
            table.push(vec![
                eps.into(),
                t.into(),
                bayes::security_exponent(eps)?.into(),
                lengths.exact.into(),
                lengths.simple.into(),
                forward.into(),
                ratio.into(),
            ]);
        }
    }
    Ok(Report::new(table, checks))
}

pub const MIN_TRIALS_WITHOUT_WARNING: u64 = 100;

pub fn montecarlo(attack: AttackArg, args: &SweepArgs) -> Result<Report, CliError> {
    let trials = args.trials.unwrap_or(100_000);
    let seed = args.seed.unwrap_or(1);
    let (kind, label, default_t) = match attack {
        AttackArg::Bayes => (AttackKind::BayesProjective, "bayes", 4),
        AttackArg::Symmetry => (AttackKind::SymmetryTest(PairBasis::Uniform), "symmetry", 1),
    };
    let mut table = Table::new(&[
        "attack",
        "n",
        "t",
        "s",
        "key_len",
        "trials",
        "seed",
        "successes",
        "empirical",
        "std_error",
        "analytic",
        "z_score",
    ]);
    for n in args.n_or(&[10])? {
        let n = as_u32("n", n)?;
        for t in args.t_or(&[default_t])? {
            let t = as_u32("T", t)?;
            for s in args.s_or(&[1])? {
                let s = as_usize("s", s)?;
                for key_len in args.key_len_or(&[s as u64])? {
                    let key_len = as_usize("N", key_len)?;
                    let params = ProtocolParams::new(n, key_len, t, s)?;
                    let cfg = TrialConfig::new(params, kind, trials, seed)?;
                    let analytic = analytic_success(&cfg)?;
                    let est = estimate(&cfg)?;
                    table.push(vec![
                        label.into(),
                        n.into(),
                        t.into(),
                        s.into(),
                        key_len.into(),
                        trials.into(),
                        seed.into(),
                        est.successes.into(),
                        est.mean.into(),
                        est.std_error.into(),
                        analytic.into(),
                        est.z_score(analytic).into(),
                    ]);
                }
            }
        }
    }
    let mut report = Report::new(table, Checks::default());
    if trials < MIN_TRIALS_WITHOUT_WARNING {
        report
            .warnings
            .push(format!("only {trials} trials; standard errors and z-scores are unreliable below {MIN_TRIALS_WITHOUT_WARNING}"));
    }
    Ok(report)
}

/// Runs every check at its default scale. Ignores the range flags so the
/// verdict does not depend on how the tool was invoked.
pub fn check_all() -> Result<Report, CliError> {
    let defaults = SweepArgs::default();
    let mut groups: BTreeMap<&'static str, Checks> = BTreeMap::new();
    groups.insert("prior", prior(&defaults)?.checks);
    groups.insert("figure1_posteriors", figure(1, &defaults)?.checks);
    groups.insert("figure2_holevo_gap", figure(2, &defaults)?.checks);
    groups.insert("figure4_success_bounds", figure(4, &defaults)?.checks);
    groups.insert("figure5_codeword_bound", figure(5, &defaults)?.checks);
    groups.insert("security_lengths", security(&defaults)?.checks);
    groups.insert("closed_forms", closed_form_checks()?);
    groups.insert("montecarlo", montecarlo_checks()?);

    let mut table = Table::new(&["group", "checks", "violations", "passed"]);
    let mut all = Checks::default();
    for (name, c) in groups {
        table.push(vec![name.into(), c.evaluated.into(), c.violations.len().into(), c.violations.is_empty().into()]);
        all.absorb(c);
    }
    Ok(Report::new(table, all))
}

fn closed_form_checks() -> Result<Checks, CliError> {
    let mut checks = Checks::default();
    for s in 1..=64 {
        let (fwd, sym) = (forward_search_success(1, s)?, average_success_symmetry(s)?);
        checks.check("forward search at T=1 equals symmetry test", fwd == sym, || format!("s={s}: {fwd} != {sym}"));
    }
    for s in 0..=12 {
        for q in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let (a, b) = (qpke_core::parity::parity_iteration(q, s), parity_closed_form(q, s));
            checks.check("parity iteration matches closed form", (a - b).abs() <= 1e-12, || {
                format!("s={s} q={q}: {a} vs {b}")
            });
        }
    }
    for e in 3..=10 {
        for t in 2..=8 {
            let eps = 2f64.powi(-e);
            let simple = bayes::required_codeword_length(eps, t)?.simple as i64;
            let forward = forward_search_length(eps, t)? as i64;
            checks.check("simple length is three times forward search", (simple - 3 * forward).abs() <= 1, || {
                format!("eps=2^-{e} T={t}: {simple} vs {forward}")
            });
        }
    }
    let one = bayes::optimal_collective(1)?;
    checks.check("optimal collective at T=1", (one - (0.5 + 2f64.sqrt() / 4.0)).abs() < 1e-12, || one.to_string());
    Ok(checks)
}

fn montecarlo_checks() -> Result<Checks, CliError> {
    let mut checks = Checks::default();
    let runs = [
        (AttackKind::SymmetryTest(PairBasis::Uniform), 10, 1, 1),
        (AttackKind::SymmetryTest(PairBasis::Uniform), 10, 1, 3),
        (AttackKind::BayesProjective, 10, 4, 1),
        (AttackKind::BayesProjective, 10, 4, 8),
    ];
    for (i, (kind, n, t, s)) in runs.into_iter().enumerate() {
        let cfg = TrialConfig::new(ProtocolParams::new(n, s, t, s)?, kind, 100_000, 2024 + i as u64)?;
        let want = analytic_success(&cfg)?;
        let est = estimate(&cfg)?;
        let z = est.z_score(want);
        checks.check("simulation within 3 standard errors", z.abs() <= 3.0, || {
            format!("{kind:?} n={n} T={t} s={s}: {} vs {want} (z={z:.2})", est.mean)
        });
    }
    Ok(checks)
}
