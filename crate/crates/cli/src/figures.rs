//! Data tables behind each figure.

use qsteg::homodyne::{default_beta, simulate_perr_surface, SimConfig};
use qsteg::rates::{
    evaluate, optimize_f, pair_uniforms, scheme_sweep, Objective, Prior, RateReport, Scheme,
    SweepConfig,
};

use crate::grid::Grid;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig1,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Optimize {
    Rate,
    RatePerKey,
}

impl From<Optimize> for Objective {
    fn from(o: Optimize) -> Self {
        match o {
            Optimize::Rate => Objective::Rate,
            Optimize::RatePerKey => Objective::RatePerKey,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureConfig {
    pub n_bar_grid: Option<Grid>,
    pub f: Option<f64>,
    pub f_grid: Option<Grid>,
    pub rc_grid: Option<Grid>,
    pub beta: Option<f64>,
    pub samples: usize,
    pub pairs: usize,
    pub seed: u64,
    pub optimize: Option<Optimize>,
}

fn grid_or(grid: &Option<Grid>, default: &str) -> Grid {
    grid.clone()
        .unwrap_or_else(|| default.parse().expect("built-in grid parses"))
}

impl FigureConfig {
    fn sweep(&self) -> SweepConfig {
        SweepConfig {
            beta: self.beta,
            pairs: self.pairs,
            seed: self.seed,
        }
    }

    fn beta_label(&self) -> String {
        self.beta
            .map_or_else(|| "100*sqrt(max(nbar,1))".to_string(), |b| b.to_string())
    }
}

pub fn build(figure: Figure, cfg: &FigureConfig) -> qsteg::Result<Table> {
    match figure {
        Figure::Fig1 => fig1(cfg),
        Figure::Fig3 => fig3(cfg),
        Figure::Fig4 => fig4(cfg),
        Figure::Fig6 => fig6(cfg),
        Figure::Fig7 => fig7(cfg),
    }
}

fn report_cells(r: &RateReport) -> [f64; 4] {
    [r.p_err, r.rate, r.key_rate, r.ratio]
}

fn fig1(cfg: &FigureConfig) -> qsteg::Result<Table> {
    let grid = grid_or(&cfg.n_bar_grid, "0.1:5:0.1");
    let sweep = cfg.sweep();
    let no_key = scheme_sweep(
        Scheme::DistributionNoKey,
        grid.values(),
        Prior::Fixed(0.5),
        &sweep,
    )?;
    let key = scheme_sweep(
        Scheme::VerticalAngle,
        grid.values(),
        Prior::Fixed(0.5),
        &sweep,
    )?;
    let mut t = Table::new(vec![
        "n_bar",
        "no_key_p_err",
        "no_key_rate",
        "key_p_err",
        "key_rate",
    ]);
    t.meta("figure", "fig1");
    t.meta("nbar_grid", &grid);
    for ((n, a), b) in grid.values().iter().zip(&no_key).zip(&key) {
        t.push(vec![*n, a.p_err, a.rate, b.p_err, b.rate]);
    }
    Ok(t)
}

fn fig3(cfg: &FigureConfig) -> qsteg::Result<Table> {
    let grid = grid_or(&cfg.n_bar_grid, "0.5:5:0.5");
    let rc = grid_or(&cfg.rc_grid, "0.2:0.7:0.01");
    let f = cfg.f.unwrap_or(0.5);
    let sim = SimConfig::new(cfg.samples, cfg.seed)?;
    let surface = simulate_perr_surface(grid.values(), rc.values(), cfg.beta, f, &sim)?;
    let mut t = Table::new(vec!["n_bar", "r_c", "p_err", "std_err"]);
    t.meta("figure", "fig3");
    t.meta("seed", cfg.seed);
    t.meta("beta", cfg.beta_label());
    t.meta("samples", cfg.samples);
    t.meta("f", f);
    t.meta("nbar_grid", &grid);
    t.meta("rc_grid", &rc);
    for p in surface {
        t.push(vec![p.n_bar, p.r_c, p.p_err, p.std_err]);
    }
    Ok(t)
}

fn fig4(cfg: &FigureConfig) -> qsteg::Result<Table> {
    let grid = grid_or(&cfg.n_bar_grid, "0.5:5:0.5");
    let mut t = Table::new(vec!["n_bar", "f", "p_err", "rate", "key_rate", "ratio"]);
    t.meta("figure", "fig4");
    t.meta("nbar_grid", &grid);
    let sweep = cfg.sweep();
    if let Some(objective) = cfg.optimize {
        t.meta("optimize", format!("{objective:?}"));
        for (i, &n) in grid.values().iter().enumerate() {
            let (f, r) = optimize_f(
                Scheme::DistributionKeyed,
                n,
                objective.into(),
                &sweep,
                i as u64,
            )?;
            let mut row = vec![n, f];
            row.extend(report_cells(&r));
            t.push(row);
        }
        return Ok(t);
    }
    let f_grid = grid_or(&cfg.f_grid, "0.05:0.95:0.05");
    t.meta("f_grid", &f_grid);
    for &n in grid.values() {
        for &f in f_grid.values() {
            let r = evaluate(Scheme::DistributionKeyed, n, f, default_beta(n), &[])?;
            let mut row = vec![n, f];
            row.extend(report_cells(&r));
            t.push(row);
        }
    }
    Ok(t)
}

const PAIRWISE: [Scheme; 2] = [Scheme::PairwiseHomodyne, Scheme::PairwiseHelstrom];

fn fig6(cfg: &FigureConfig) -> qsteg::Result<Table> {
    let grid = grid_or(&cfg.n_bar_grid, "0.5:5:0.5");
    let mut t = Table::new(vec![
        "n_bar",
        "homodyne_f",
        "homodyne_p_err",
        "homodyne_rate",
        "homodyne_key_rate",
        "homodyne_ratio",
        "helstrom_f",
        "helstrom_p_err",
        "helstrom_rate",
        "helstrom_key_rate",
        "helstrom_ratio",
    ]);
    t.meta("figure", "fig6");
    t.meta("seed", cfg.seed);
    t.meta("beta", cfg.beta_label());
    t.meta("pairs", cfg.pairs);
    t.meta("nbar_grid", &grid);
    let sweep = cfg.sweep();
    if let Some(objective) = cfg.optimize {
        t.meta("optimize", format!("{objective:?}"));
        for (i, &n) in grid.values().iter().enumerate() {
            let mut row = vec![n];
            for scheme in PAIRWISE {
                let (f, r) = optimize_f(scheme, n, objective.into(), &sweep, i as u64)?;
                row.push(f);
                row.extend(report_cells(&r));
            }
            t.push(row);
        }
        return Ok(t);
    }
    let f_grid = grid_or(&cfg.f_grid, "0.1:0.9:0.1");
    t.meta("f_grid", &f_grid);
    for (i, &n) in grid.values().iter().enumerate() {
        let beta = cfg.beta.unwrap_or_else(|| default_beta(n));
        let uniforms = pair_uniforms(&sweep, i as u64);
        for &f in f_grid.values() {
            let mut row = vec![n];
            for scheme in PAIRWISE {
                row.push(f);
                row.extend(report_cells(&evaluate(scheme, n, f, beta, &uniforms)?));
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn fig7(cfg: &FigureConfig) -> qsteg::Result<Table> {
    let grid = grid_or(&cfg.n_bar_grid, "0.1:5:0.1");
    let prior = cfg.f.map_or(Prior::ThermalMatched, Prior::Fixed);
    let sweep = cfg.sweep();
    let fock = scheme_sweep(Scheme::FockCapacity, grid.values(), prior, &sweep)?;
    let hel = scheme_sweep(Scheme::PairwiseHelstrom, grid.values(), prior, &sweep)?;
    let hom = scheme_sweep(Scheme::PairwiseHomodyne, grid.values(), prior, &sweep)?;
    let mut t = Table::new(vec![
        "n_bar",
        "f",
        "fock_rate",
        "helstrom_rate",
        "homodyne_rate",
    ]);
    t.meta("figure", "fig7");
    t.meta("seed", cfg.seed);
    t.meta("beta", cfg.beta_label());
    t.meta("pairs", cfg.pairs);
    t.meta(
        "f",
        cfg.f
            .map_or_else(|| "nbar/(nbar+1)".to_string(), |f| f.to_string()),
    );
    t.meta("nbar_grid", &grid);
    for (i, &n) in grid.values().iter().enumerate() {
        t.push(vec![n, prior.at(n), fock[i].rate, hel[i].rate, hom[i].rate]);
    }
    Ok(t)
}
