//! Scenario registry. Each scenario reads its keys, validates them through the
//! owning module, and returns a job that produces tables and a summary.

use crate::config::Config;
use crate::error::CliError;
use crate::table::{Cell, Table};
use floquet_core::dynloc::{self, AcLatticeParams};
use floquet_core::ed::Path;
use floquet_core::hsf::{self, Autocorrelator, Boundary, Conserved, HsfParams};
use floquet_core::ising::{self, InitialState, IsingChainParams, RunOptions};
use floquet_core::scars::{self, PulseOrder, PxpInitial, PxpParams, XyParams};
use floquet_core::timecrystal::{self, TcInitial, TcParams};
use floquet_core::{bessel, special_frequency, DriveKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::BTreeMap;
use std::str::FromStr;

pub const SCENARIOS: [&str; 11] = [
    "freeze",
    "alpha-scan",
    "dynloc",
    "hsf-entropy",
    "hsf-fragments",
    "hsf-autocorr",
    "xy-tower",
    "pxp-fidelity",
    "pxp-eigen",
    "timecrystal",
    "tc-melting",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Freeze,
    AlphaScan,
    Dynloc,
    HsfEntropy,
    HsfFragments,
    HsfAutocorr,
    XyTower,
    PxpFidelity,
    PxpEigen,
    Timecrystal,
    TcMelting,
}

impl Scenario {
    pub const ALL: [Scenario; 11] = [
        Scenario::Freeze,
        Scenario::AlphaScan,
        Scenario::Dynloc,
        Scenario::HsfEntropy,
        Scenario::HsfFragments,
        Scenario::HsfAutocorr,
        Scenario::XyTower,
        Scenario::PxpFidelity,
        Scenario::PxpEigen,
        Scenario::Timecrystal,
        Scenario::TcMelting,
    ];

    pub fn name(self) -> &'static str {
        SCENARIOS[Scenario::ALL.iter().position(|&s| s == self).expect("listed")]
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        SCENARIOS
            .iter()
            .position(|&n| n == s)
            .map(|i| Scenario::ALL[i])
            .ok_or_else(|| CliError::UnknownScenario(s.to_string()))
    }
}

/// Named tables plus scalar results for the manifest.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub files: Vec<(String, Table)>,
    pub summary: BTreeMap<String, Value>,
}

impl Output {
    fn file(mut self, name: &str, t: Table) -> Self {
        self.files.push((name.to_string(), t));
        self
    }

    fn note(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.summary.insert(key.to_string(), v.into());
        self
    }
}

pub type Job = Box<dyn FnOnce() -> floquet_core::Result<Output>>;

/// A validated scenario ready to execute.
pub struct Prepared {
    pub scenario: Scenario,
    pub config: BTreeMap<String, Value>,
    pub job: Job,
}

pub fn prepare(scenario: Scenario, mut cfg: Config, seed: u64) -> Result<Prepared, CliError> {
    let model = |source| CliError::Model { scenario: scenario.name(), source };
    let job = match scenario {
        Scenario::Freeze => freeze(&mut cfg),
        Scenario::AlphaScan => alpha_scan(&mut cfg),
        Scenario::Dynloc => dynloc_run(&mut cfg),
        Scenario::HsfEntropy => hsf_entropy(&mut cfg, seed),
        Scenario::HsfFragments => hsf_fragments(&mut cfg),
        Scenario::HsfAutocorr => hsf_autocorr(&mut cfg),
        Scenario::XyTower => xy_tower(&mut cfg),
        Scenario::PxpFidelity => pxp_fidelity(&mut cfg),
        Scenario::PxpEigen => pxp_eigen(&mut cfg),
        Scenario::Timecrystal => tc_run(&mut cfg, seed),
        Scenario::TcMelting => tc_melting(&mut cfg, seed),
    };
    let job = job.map_err(|e| match e {
        Failure::Config(e) => e,
        Failure::Model(e) => model(e),
    })?;
    Ok(Prepared { scenario, config: cfg.finish(scenario.name())?, job })
}

enum Failure {
    Config(CliError),
    Model(floquet_core::Error),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Config(e)
    }
}

impl From<floquet_core::Error> for Failure {
    fn from(e: floquet_core::Error) -> Self {
        Failure::Model(e)
    }
}

type Prep = Result<Job, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Config(CliError::Config(msg.into()))
}

fn boundary(cfg: &mut Config, key: &str, default: &str) -> Result<Boundary, Failure> {
    match cfg.string(key, default)?.as_str() {
        "pbc" => Ok(Boundary::Pbc),
        "obc" => Ok(Boundary::Obc),
        s => Err(bad(format!("'{key}' must be \"pbc\" or \"obc\", got \"{s}\""))),
    }
}

fn path(cfg: &mut Config) -> Result<Path, Failure> {
    match cfg.string("run.path", "auto")?.as_str() {
        "auto" => Ok(Path::Auto),
        "dense" => Ok(Path::Dense),
        "action-only" => Ok(Path::ActionOnly),
        s => Err(bad(format!("'run.path' must be auto, dense or action-only, got \"{s}\""))),
    }
}

fn series_table(value_name: &str, s: &floquet_core::TimeSeries, stride: usize) -> Table {
    let mut t = Table::new(["n", "t", value_name]);
    for (i, (time, &v)) in s.times().zip(&s.values).enumerate() {
        t.push(vec![(i * stride).into(), time.into(), v.into()]);
    }
    t
}

// ---------------------------------------------------------------- Ising

fn ising_params(cfg: &mut Config) -> Result<(IsingChainParams, f64), Failure> {
    let l = cfg.usize("ising.l", 500)?;
    let j = cfg.f64("ising.j", 1.0)?;
    let h_s = cfg.f64("ising.h_s", 0.1)?;
    let h_1 = cfg.f64("ising.h_1", 20.0)?;
    let gamma = cfg.f64("ising.gamma", 0.0)?;
    let omega = match (cfg.opt_f64("ising.omega")?, cfg.opt_usize("ising.special_n")?) {
        (Some(_), Some(_)) => return Err(bad("give either 'ising.omega' or 'ising.special_n', not both")),
        (Some(w), None) => w,
        (None, n) => {
            let n = n.unwrap_or(2);
            cfg.resolve("ising.special_n", n);
            special_frequency(DriveKind::Cosine, h_1, n)?
        }
    };
    cfg.resolve("ising.omega", omega);
    let mut p = IsingChainParams::new(l, h_s, h_1, gamma, omega)?;
    p.j = j;
    p.validate()?;
    Ok((p, omega))
}

fn ising_initial(cfg: &mut Config) -> Result<InitialState, Failure> {
    match cfg.string("ising.initial", "ground")?.as_str() {
        "ground" => Ok(InitialState::GroundStateAtT0),
        "all-down" => Ok(InitialState::AllDown),
        s => Err(bad(format!("'ising.initial' must be \"ground\" or \"all-down\", got \"{s}\""))),
    }
}

fn freeze(cfg: &mut Config) -> Prep {
    let (p, omega) = ising_params(cfg)?;
    let opts = RunOptions {
        n_cycles: cfg.usize("run.n_cycles", 2000)?,
        initial: ising_initial(cfg)?,
        entropy_every: cfg.usize("run.entropy_every", 0)?,
        initial_steps: cfg.usize("run.substeps", 16)?.max(1),
    };
    let start = cfg.usize("run.average_start", 0)?;
    let window = cfg.usize("run.average_window", 200)?;
    Ok(Box::new(move || {
        let run = ising::stroboscopic_run(&p, &opts)?;
        let entropy: BTreeMap<usize, f64> = run.entropy.iter().copied().collect();
        let mut t = Table::new(["n", "t", "M_z", "S_half", "norm_loss"]);
        for (n, (time, &m)) in run.m_z.times().zip(&run.m_z.values).enumerate() {
            let loss = run.norm_loss.get(n);
            t.push(vec![n.into(), time.into(), m.into(), entropy.get(&n).copied().into(), loss.into()]);
        }
        let tail = run.m_z.values.iter().skip(start).take(window);
        let count = tail.clone().count();
        let mean = (count > 0).then(|| tail.sum::<f64>() / count as f64);
        Ok(Output::default()
            .file("freeze.csv", t)
            .note("omega_D", omega)
            .note("mu", p.mu())
            .note("max_abs_dM", run.m_z.max_departure())
            .note("mean_M_z_window", mean))
    }))
}

fn alpha_scan(cfg: &mut Config) -> Prep {
    let j = cfg.f64("ising.j", 1.0)?;
    let h_s = cfg.f64("ising.h_s", 0.1)?;
    let h_1 = cfg.f64("ising.h_1", 20.0)?;
    let w1 = special_frequency(DriveKind::Cosine, h_1, 1)?;
    let gammas = cfg.f64_list("ising.gammas", &[0.01, 0.1])?;
    let omegas = cfg.f64_list("ising.omegas", &[w1, 1.5 * w1])?;
    let sizes = cfg.usize_list("ising.sizes", &[32, 64, 128, 256])?;
    if gammas.is_empty() || omegas.is_empty() {
        return Err(bad("'ising.gammas' and 'ising.omegas' must be non-empty"));
    }
    let mut base = IsingChainParams::new(sizes.first().copied().unwrap_or(4), h_s, h_1, gammas[0], omegas[0])?;
    base.j = j;
    base.validate()?;
    Ok(Box::new(move || {
        let fits = ising::alpha_scan(&base, &gammas, &omegas, &sizes)?;
        let mut t = Table::new(["gamma", "omega_D", "alpha", "residual", "intercept", "reliable"]);
        for f in &fits {
            t.push(vec![f.gamma.into(), f.omega.into(), f.alpha.into(), f.residual.into(), f.intercept.into(), f.reliable.into()]);
        }
        Ok(Output::default().file("alpha.csv", t).note("unreliable_fits", fits.iter().filter(|f| !f.reliable).count()))
    }))
}

// ---------------------------------------------------------------- dynamical localization

fn dynloc_run(cfg: &mut Config) -> Prep {
    let mut xs = cfg.f64_list("dynloc.x", &[1.0])?;
    for n in cfg.usize_list("dynloc.bessel_zeros", &[1])? {
        xs.push(bessel::bessel_zero(n)?);
    }
    let e0 = cfg.f64("dynloc.e0", 1.0)?;
    let j_prime = cfg.f64("dynloc.j_prime", 1.0)?;
    let l = cfg.usize("dynloc.l", 1000)?;
    let filling = cfg.f64("dynloc.filling", 0.5)?;
    let t_max = cfg.f64("dynloc.t_max", 200.0)?;
    let samples = cfg.usize("dynloc.samples", 200)?.max(1);
    let numeric = cfg.bool("dynloc.numeric", true)?;
    if !(t_max > 0.0) {
        return Err(bad("'dynloc.t_max' must be positive"));
    }
    let params = xs
        .iter()
        .map(|&x| {
            if !(x > 0.0) {
                return Err(bad(format!("x = E_0/omega_D must be positive, got {x}")));
            }
            let p = AcLatticeParams { j_prime, e0, omega: e0 / x, l, filling };
            p.validate()?;
            Ok(p)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Box::new(move || {
        let mut t = Table::new(["t", "n2_analytic", "n2_numeric", "x", "omega_D"]);
        let mut out = Output::default();
        for p in &params {
            let mut peak = 0.0f64;
            for i in 0..=samples {
                let time = t_max * i as f64 / samples as f64;
                let a = dynloc::n2_analytic(time, p)?;
                peak = peak.max(a);
                let n = if numeric { Some(dynloc::n2_numeric(time, p)?) } else { None };
                t.push(vec![time.into(), a.into(), n.into(), p.x().into(), p.omega.into()]);
            }
            out = out.note(&format!("max_n2_at_x={}", p.x()), peak);
        }
        Ok(out.file("dynloc.csv", t))
    }))
}

// ---------------------------------------------------------------- fragmented chain

fn hsf_params(cfg: &mut Config, default_bc: &str) -> Result<HsfParams, Failure> {
    let l = cfg.usize("hsf.l", 12)?;
    let p = HsfParams {
        l,
        n: cfg.usize("hsf.n", l / 2)?,
        j: cfg.f64("hsf.j", 1.0)?,
        v0: cfg.f64("hsf.v0", 1.0)?,
        v2: cfg.f64("hsf.v2", 0.5)?,
        v1: cfg.f64("hsf.v1", 40.0)?,
        omega: cfg.f64("hsf.omega", 20.0)?,
        bc: boundary(cfg, "hsf.bc", default_bc)?,
    };
    p.validate()?;
    Ok(p)
}

fn hsf_entropy(cfg: &mut Config, seed: u64) -> Prep {
    let p = hsf_params(cfg, "pbc")?;
    let b = p.basis()?;
    let initial = match cfg.string("hsf.initial", "random")?.as_str() {
        "random" => b.state(ChaCha8Rng::seed_from_u64(seed).gen_range(0..b.dim())),
        s => b.parse(s)?,
    };
    if b.index(initial).is_none() {
        return Err(bad(format!("initial state {} is not in the N = {} sector", b.bitstring(initial), p.n)));
    }
    cfg.resolve("hsf.initial", b.bitstring(initial));
    let n_cycles = cfg.usize("run.n_cycles", 400)?;
    let path = path(cfg)?;
    Ok(Box::new(move || {
        let s = hsf::entanglement_run(&p, &b, initial, n_cycles, path)?;
        let tail = &s.values[s.len() - (s.len() / 4).max(1)..];
        Ok(Output::default()
            .file("entropy.csv", series_table("S_over_Sp", &s, 1))
            .note("initial", b.bitstring(initial))
            .note("page_value", hsf::half_chain_page(p.l)?)
            .note("gamma_1", p.gamma1())
            .note("special", p.is_special())
            .note("tail_mean_S_over_Sp", tail.iter().sum::<f64>() / tail.len() as f64))
    }))
}

fn hsf_fragments(cfg: &mut Config) -> Prep {
    let p = hsf_params(cfg, "pbc")?;
    let b = p.basis()?;
    Ok(Box::new(move || {
        let f = hsf::fragments(&hsf::hsf_hf1(&p, &b)?);
        let nd = hsf::conserved_diagonal(&p, &b, Conserved::Nd);
        let nds = hsf::conserved_diagonal(&p, &b, Conserved::NdStaggered);
        let mut t = Table::new(["fragment_id", "dim", "n_d", "n_d_s", "example_state"]);
        for (id, frag) in f.fragments.iter().enumerate() {
            let i = frag[0];
            t.push(vec![id.into(), frag.len().into(), nd[i].into(), nds[i].into(), b.bitstring(b.state(i)).into()]);
        }
        Ok(Output::default()
            .file("fragments.csv", t)
            .note("fragments", f.count())
            .note("largest", f.largest())
            .note("total", f.total)
            .note("largest_over_total", f.ratio())
            .note("gamma_1", p.gamma1())
            .note("special", p.is_special()))
    }))
}

fn hsf_autocorr(cfg: &mut Config) -> Prep {
    let p = hsf_params(cfg, "obc")?;
    let b = p.basis()?;
    let n_cycles = cfg.usize("run.n_cycles", 5000)?;
    let stride = cfg.usize("run.stride", 1)?.max(1);
    let threshold = cfg.f64("hsf.threshold", 0.125)?;
    Ok(Box::new(move || {
        let ac = Autocorrelator::new(&p, &b)?;
        let mut t = Table::new(["n", "t", "C_L", "C_L_connected"]);
        for n in (0..=n_cycles).step_by(stride) {
            t.push(vec![n.into(), (n as f64 * p.period()).into(), ac.value(n).into(), ac.connected(n).into()]);
        }
        Ok(Output::default()
            .file("autocorr.csv", t)
            .note("final_C_L", ac.value(n_cycles))
            .note("final_C_L_connected", ac.connected(n_cycles))
            .note("mean_density", ac.mean_density())
            .note("threshold", threshold)
            .note("n_star", ac.threshold_cycle(threshold, n_cycles)))
    }))
}

// ---------------------------------------------------------------- scars

fn xy_tower(cfg: &mut Config) -> Prep {
    let p = XyParams::new(cfg.usize("xy.l", 6)?, cfg.f64("xy.j", 1.0)?, cfg.f64("xy.b0", 0.5)?)?;
    Ok(Box::new(move || {
        let tw = scars::bimagnon_tower(&p)?;
        let mut t = Table::new(["n", "energy", "ladder", "ladder_expected"]);
        for (n, &e) in tw.energies.iter().enumerate() {
            let lad = tw.ladder.get(n).copied();
            let want = (n < p.l).then(|| scars::xy::ladder_coefficient(p.l, n));
            t.push(vec![n.into(), e.into(), lad.into(), want.into()]);
        }
        let (spacing, deviation) = tw.spacing();
        Ok(Output::default()
            .file("tower.csv", t)
            .note("spacing", spacing)
            .note("spacing_deviation", deviation)
            .note("max_residual", tw.max_residual))
    }))
}

fn pxp_params(cfg: &mut Config) -> Result<PxpParams, Failure> {
    let l = cfg.usize("pxp.l", 12)?;
    let omega = cfg.f64("pxp.omega", 1.0)?;
    let lambda0 = cfg.f64("pxp.lambda0", 15.0)?;
    let bc = boundary(cfg, "pxp.bc", "obc")?;
    let omega_d = match (cfg.opt_f64("pxp.omega_d")?, cfg.opt_usize("pxp.special_n")?) {
        (Some(_), Some(_)) => return Err(bad("give either 'pxp.omega_d' or 'pxp.special_n', not both")),
        (Some(w), None) => w,
        (None, Some(n)) => PxpParams::special(l, omega, lambda0, n, bc)?.omega_d,
        (None, None) => 8.5,
    };
    cfg.resolve("pxp.omega_d", omega_d);
    let order = match cfg.string("pxp.order", "minus-first")?.as_str() {
        "minus-first" => PulseOrder::MinusFirst,
        "plus-first" => PulseOrder::PlusFirst,
        s => return Err(bad(format!("'pxp.order' must be \"minus-first\" or \"plus-first\", got \"{s}\""))),
    };
    let p = PxpParams { order, ..PxpParams::new(l, omega, lambda0, omega_d, bc)? };
    p.validate()?;
    Ok(p)
}

fn pxp_fidelity(cfg: &mut Config) -> Prep {
    let p = pxp_params(cfg)?;
    let initial = match cfg.string("pxp.initial", "z2")?.as_str() {
        "z2" => PxpInitial::Z2,
        "vacuum" => PxpInitial::Vacuum,
        s => return Err(bad(format!("'pxp.initial' must be \"z2\" or \"vacuum\", got \"{s}\""))),
    };
    let n_cycles = cfg.usize("run.n_cycles", 200)?;
    let path = path(cfg)?;
    let b = p.basis()?;
    Ok(Box::new(move || {
        let u = scars::pxp_floquet(&p, &b, path)?;
        let f = scars::fidelity_run(&u, &b, initial, n_cycles)?;
        let a0 = scars::a0(&p);
        Ok(Output::default()
            .file("fidelity.csv", series_table("F", &f, 1))
            .note("max_F_after_5", f.max_in(5..=n_cycles))
            .note("special", p.is_special())
            .note("a0_re", a0.re)
            .note("a0_im", a0.im))
    }))
}

fn pxp_eigen(cfg: &mut Config) -> Prep {
    let p = pxp_params(cfg)?;
    let threshold = cfg.f64("pxp.overlap_threshold", 0.01)?;
    let window = cfg.usize("pxp.o22_window", 51)?;
    let b = p.basis()?;
    Ok(Box::new(move || {
        let u = scars::pxp_floquet(&p, &b, Path::Dense)?;
        let r = scars::eigenstate_scan(&u, &b)?;
        let fam = scars::scar_families(&r, threshold)?;
        let outliers = scars::o22_outliers(&r, window)?;
        let (header, rows) = r.table();
        let mut t = Table::new(header);
        for row in rows {
            t.push(row.into_iter().map(Cell::from).collect());
        }
        Ok(Output::default()
            .file("eigen.csv", t)
            .note("dim", b.dim())
            .note("vacuum_family", fam.vacuum.len())
            .note("z2_family", fam.z2.len())
            .note("vacuum_low_entropy", fam.vacuum_low_entropy)
            .note("z2_low_entropy", fam.z2_low_entropy)
            .note("families_disjoint", fam.disjoint)
            .note("median_entropy", fam.median_entropy)
            .note("o22_outliers", outliers.len()))
    }))
}

// ---------------------------------------------------------------- time crystal

fn tc_params(cfg: &mut Config, seed: u64, with_drive: bool) -> Result<TcParams, Failure> {
    let l = cfg.usize("tc.l", 10)?;
    let j = cfg.f64("tc.j", 1.0)?;
    let h_z = cfg.f64("tc.h_z", 0.0)?;
    let (period, epsilon) = if with_drive { (cfg.f64("tc.period", 1.0)?, cfg.f64("tc.epsilon", 0.03)?) } else { (1.0, 0.0) };
    let bc = boundary(cfg, "tc.bc", "obc")?;
    let initial = match cfg.string("tc.initial", "polarized")?.as_str() {
        "polarized" => TcInitial::Polarized,
        "staggered" => TcInitial::Staggered,
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bits: String = (0..l).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect();
            cfg.resolve("tc.initial", bits.clone());
            TcInitial::Bits(bits)
        }
        s => TcInitial::Bits(s.to_string()),
    };
    let p = TcParams { bc, initial, ..TcParams::new(l, j, h_z, period, epsilon)? };
    p.validate()?;
    p.initial_config()?;
    Ok(p)
}

fn tc_run(cfg: &mut Config, seed: u64) -> Prep {
    let p = tc_params(cfg, seed, true)?;
    let n_cycles = cfg.usize("run.n_cycles", 1000)?;
    Ok(Box::new(move || {
        let m = timecrystal::subharmonic_run(&p, n_cycles)?;
        Ok(Output::default()
            .file("magnetization.csv", series_table("M", &m, 1))
            .note("kick_angle", p.kick_angle())
            .note("initial_period_two_amplitude", timecrystal::period_two_amplitude(&m.values, 0, 20))
            .note("dominant_frequency", timecrystal::dominant_frequency(&m.values)))
    }))
}

fn tc_melting(cfg: &mut Config, seed: u64) -> Prep {
    let base = tc_params(cfg, seed, false)?;
    let periods = cfg.f64_list("tc.periods", &[0.5, 0.25, 0.125, 0.0625])?;
    let epsilons = cfg.f64_list("tc.epsilons", &[0.03])?;
    let cap = cfg.usize("run.cap", timecrystal::MELT_CAP)?;
    if periods.is_empty() || epsilons.is_empty() {
        return Err(bad("'tc.periods' and 'tc.epsilons' must be non-empty"));
    }
    for (&t, &e) in periods.iter().zip(epsilons.iter().cycle()) {
        TcParams { period: t, epsilon: e, ..base.clone() }.validate()?;
    }
    Ok(Box::new(move || {
        let scan = timecrystal::melting_scan(&base, &periods, &epsilons, cap)?;
        let mut t = Table::new(["T", "eps", "n_star", "censored"]);
        for m in &scan {
            t.push(vec![m.period.into(), m.epsilon.into(), m.n_star.into(), m.censored.into()]);
        }
        let slope = timecrystal::melting_slope(&scan).ok();
        Ok(Output::default().file("melting.csv", t).note("ln_n_star_slope_vs_inverse_T", slope).note("cap", cap))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use floquet_core::DriveProtocol;

    #[test]
    fn names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert!("nope".parse::<Scenario>().is_err());
    }

    #[test]
    fn drive_protocol_matches_ising_special_frequency() {
        let w = special_frequency(DriveKind::Cosine, 20.0, 2).unwrap();
        let d = DriveProtocol::cosine(20.0, 0.1, 0.0, w).unwrap();
        assert!(d.suppression_factor().unwrap().abs() < 1e-9);
    }

    #[test]
    fn invalid_model_parameters_are_validation_errors() {
        let cfg = Config::from_str(r#"{"ising.l": 7}"#).unwrap();
        let err = prepare(Scenario::Freeze, cfg, 0).err().unwrap();
        assert_eq!(err.exit_code(), 1, "{err}");
    }

    #[test]
    fn conflicting_frequency_keys_are_rejected() {
        let cfg = Config::from_str(r#"{"pxp.omega_d": 3.0, "pxp.special_n": 1}"#).unwrap();
        assert!(matches!(prepare(Scenario::PxpFidelity, cfg, 0), Err(CliError::Config(_))));
    }
}
