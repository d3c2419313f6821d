//! The five subcommands. Each builds a [`Table`] or a JSON value.

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use twocenter_core::groundstates::{density_grid, norm_separable, Density, GridSpec};
use twocenter_core::model::{matrix_potential, potential, ModelError};
use twocenter_core::specfun::{Parity, SpecfunError};
use twocenter_core::spectrum::{
    assemble_bound_state, ionization_threshold, qes_energy, razavy_params, residual_report,
    spectrum_entries, wh_params, BoundState, QesBranch, SectorSign, SpectrumError, XiCoeffs,
};
use twocenter_core::verify::{verify, VerificationReport};
use twocenter_core::{GroundState, GroundStateKind, ModelParams, Sector, WType};

use crate::config::RunConfig;
use crate::output::{Cell, Table};

fn is_divergent(e: &ModelError) -> bool {
    matches!(e, ModelError::Numerical(SpecfunError::Divergent(_)))
}

fn parse_kind(s: &str) -> Result<GroundStateKind> {
    Ok(s.parse()?)
}

fn compatible_kinds(params: &ModelParams) -> Vec<GroundStateKind> {
    GroundStateKind::ALL
        .into_iter()
        .filter(|k| GroundState::new(*k, params).is_ok())
        .collect()
}

pub fn cmd_norm(cfg: &RunConfig) -> Result<Table> {
    let kinds = match &cfg.kind {
        Some(k) => vec![parse_kind(k)?],
        None => compatible_kinds(&cfg.params),
    };
    let jobs: Vec<(f64, GroundStateKind)> = cfg
        .hbar_list
        .iter()
        .flat_map(|&h| kinds.iter().map(move |&k| (h, k)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(h, kind)| norm_row(cfg, h, kind))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        &cfg.params,
        &cfg.hbar_list,
        vec![
            "hbar",
            "kind",
            "log10_norm",
            "norm",
            "method",
            "error_estimate",
            "log10_norm_quadrature",
            "status",
        ],
    );
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

fn norm_row(cfg: &RunConfig, hbar: f64, kind: GroundStateKind) -> Result<Vec<Cell>> {
    let params = cfg.params_at(hbar)?;
    let state = GroundState::new(kind, &params)?;
    let divergent = || {
        vec![
            hbar.into(),
            kind.name().into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            "divergent".into(),
        ]
    };
    let n = match state.norm() {
        Ok(n) => n,
        Err(e) if is_divergent(&e) => return Ok(divergent()),
        Err(e) => return Err(e).with_context(|| format!("norm of {kind} at hbar = {hbar}")),
    };
    let quad = if kind.is_type_i() {
        Cell::Num(norm_separable(kind, &params)?.log10())
    } else {
        Cell::Empty
    };
    let method = serde_json::to_value(n.method)?;
    Ok(vec![
        hbar.into(),
        kind.name().into(),
        n.log10().into(),
        Cell::opt(n.representable()),
        method.as_str().unwrap_or_default().into(),
        Cell::opt(n.representable().map(|v| v * n.rel_error)),
        quad,
        "ok".into(),
    ])
}

fn parse_bound(spec: &str, params: &ModelParams) -> Result<BoundState> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [n, m, sign, parity] = parts.as_slice() else {
        bail!("bound state spec must be n,m,sign,parity, got {spec:?}");
    };
    let sign = parse_sign(sign)?;
    let parity = match *parity {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        p => bail!("parity must be even or odd, got {p:?}"),
    };
    Ok(assemble_bound_state(n.parse()?, m.parse()?, sign, parity, XiCoeffs::default(), params)?)
}

fn parse_sign(s: &str) -> Result<SectorSign> {
    match s {
        "+" | "plus" | "0" => Ok(SectorSign::Plus),
        "-" | "minus" | "2" => Ok(SectorSign::Minus),
        other => bail!("sector sign must be + or -, got {other:?}"),
    }
}

fn grid_table(cfg: &RunConfig, header: Vec<&'static str>) -> Table {
    let mut t = Table::new(&cfg.params, &cfg.hbar_list, header);
    let g = &cfg.grid;
    t.comments.push(format!(
        "grid={},{},{},{},{},{}",
        g.x1_min, g.x1_max, g.x2_min, g.x2_max, g.nx, g.ny
    ));
    t
}

pub fn cmd_density(cfg: &RunConfig, normalize: bool) -> Result<Table> {
    let params = cfg.params_at(cfg.single_hbar()?)?;
    let kind = cfg.kind.clone().unwrap_or_else(|| {
        compatible_kinds(&params)
            .first()
            .map_or("bosonic_i".into(), |k| k.name().to_string())
    });
    let (state, norm): (Box<dyn Density>, Option<f64>) = if let Some(spec) = kind.strip_prefix("bound:") {
        let bs = parse_bound(spec, &params)?;
        let norm = if normalize {
            let n = bs.normalizability()?;
            Some(n.norm.ok_or_else(|| anyhow!("bound state {spec} is not normalizable"))?.value())
        } else {
            None
        };
        (Box::new(bs), norm)
    } else {
        let g = GroundState::new(parse_kind(&kind)?, &params)?;
        let norm = if normalize { Some(g.norm()?.value()) } else { None };
        (Box::new(g), norm)
    };
    let grid = density_grid(state.as_ref(), &cfg.grid, norm)?;
    let mut t = grid_table(cfg, vec!["x1", "x2", "density", "center"]);
    t.comments.push(format!("state={kind}"));
    t.comments.push(format!("normalized={}", grid.normalized));
    for j in 0..cfg.grid.ny {
        for i in 0..cfg.grid.nx {
            let p = cfg.grid.point(i, j);
            let flag = grid.center_flags[j * cfg.grid.nx + i];
            t.push(vec![p.x1.into(), p.x2.into(), grid.get(i, j).into(), Cell::Int(flag as i64)]);
        }
    }
    Ok(t)
}

fn potential_rows(grid: &GridSpec, params: &ModelParams, sector: Sector) -> Vec<Vec<Cell>> {
    (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..grid.nx).map(move |i| {
                let p = grid.point(i, j);
                let mut row: Vec<Cell> = vec![p.x1.into(), p.x2.into()];
                let vals = match sector {
                    Sector::One => matrix_potential(p, params).map(|m| vec![m.v11, m.v12, m.v22]),
                    s => potential(s, p, params).map(|v| vec![v]),
                };
                match vals {
                    Ok(v) => {
                        row.extend(v.into_iter().map(Cell::Num));
                        row.push(Cell::Int(0));
                    }
                    Err(_) => {
                        let width = if sector == Sector::One { 3 } else { 1 };
                        row.extend(std::iter::repeat(Cell::Empty).take(width));
                        row.push(Cell::Int(1));
                    }
                }
                row
            })
        })
        .collect()
}

pub fn cmd_potential(cfg: &RunConfig) -> Result<Table> {
    let params = cfg.params_at(cfg.single_hbar()?)?;
    let sector = match cfg.sector.as_deref().unwrap_or("0") {
        "0" => Sector::Zero,
        "1" => Sector::One,
        "2" => Sector::Two,
        s => bail!("potential sector must be 0, 1 or 2, got {s:?}"),
    };
    let header = if sector == Sector::One {
        vec!["x1", "x2", "v11", "v12", "v22", "singular"]
    } else {
        vec!["x1", "x2", "v", "singular"]
    };
    let mut t = grid_table(cfg, header);
    t.comments.push(format!("sector={}", sector.fermi_number()));
    for r in potential_rows(&cfg.grid, &params, sector) {
        t.push(r);
    }
    Ok(t)
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Table> {
    if cfg.params.delta == 1.0 && cfg.params.wtype == WType::I {
        explicit_spectrum(cfg)
    } else {
        energy_levels(cfg)
    }
}

fn explicit_spectrum(cfg: &RunConfig) -> Result<Table> {
    let filter = cfg.sector.as_deref().map(parse_sign).transpose()?;
    let mut jobs = Vec::new();
    for &h in &cfg.hbar_list {
        for e in spectrum_entries(h)? {
            if filter.map_or(true, |s| s == e.sector_sign) {
                jobs.push((h, e));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(h, e)| -> Result<Vec<Cell>> {
            let params = cfg.params_at(h)?;
            let parity = match e.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
            };
            let mut row: Vec<Cell> = vec![
                h.into(),
                e.n.into(),
                e.m.into(),
                e.sector_sign.symbol().into(),
                parity.into(),
                e.energy.into(),
                e.symmetry.into(),
                e.mathieu.a.into(),
                e.mathieu.q.into(),
                e.razavy.zeta.into(),
                e.razavy.m.into(),
                e.razavy.lambda.into(),
            ];
            match assemble_bound_state(e.n, e.m, e.sector_sign, e.parity, XiCoeffs::default(), &params) {
                Ok(bs) => {
                    let norm = bs.normalizability()?;
                    let r = residual_report(&bs)?;
                    row.extend([
                        "ok".into(),
                        norm.normalizable.into(),
                        r.u_ode.into(),
                        r.razavy_x.into(),
                        r.v_ode.into(),
                        r.hamiltonian_2d.into(),
                    ]);
                }
                Err(SpectrumError::Vanishing { .. }) => {
                    row.push("vanishing".into());
                    row.extend(std::iter::repeat(Cell::Empty).take(5));
                }
                Err(err) => return Err(err.into()),
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        &cfg.params,
        &cfg.hbar_list,
        vec![
            "hbar",
            "n",
            "m",
            "sector",
            "parity",
            "E",
            "I",
            "a",
            "q",
            "zeta",
            "M",
            "lambda",
            "status",
            "normalizable",
            "u_ode_residual",
            "razavy_residual",
            "v_ode_residual",
            "hamiltonian_residual",
        ],
    );
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

/// Below `δ = 1` only the energies and the `I`-independent parameters are known.
fn energy_levels(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(
        &cfg.params,
        &cfg.hbar_list,
        vec!["hbar", "n", "E_razavy", "M", "E_wh", "N_sq", "wh_regime", "threshold"],
    );
    for &h in &cfg.hbar_list {
        let params = cfg.params_at(h)?;
        for n in 0..=5u32 {
            let e = qes_energy(QesBranch::RazavyU, n, &params);
            let ew = qes_energy(QesBranch::WhV, n, &params);
            let m = razavy_params(e, 0.0, SectorSign::Plus, &params)?.m;
            let (n_sq, regime) = match wh_params(ew, 0.0, SectorSign::Plus, &params) {
                Ok(w) => (Cell::opt(w.n_sq), serde_json::to_value(w.regime)?),
                Err(_) => (Cell::Empty, serde_json::Value::from("threshold")),
            };
            t.push(vec![
                h.into(),
                n.into(),
                e.into(),
                m.into(),
                ew.into(),
                n_sq,
                regime.as_str().unwrap_or_default().into(),
                ionization_threshold(&params).into(),
            ]);
        }
    }
    Ok(t)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    cfg.hbar_list
        .iter()
        .map(|&h| Ok(verify(&cfg.params_at(h)?)?))
        .collect()
}

pub fn verify_table(cfg: &RunConfig, reports: &[VerificationReport]) -> Table {
    let mut t = Table::new(
        &cfg.params,
        &cfg.hbar_list,
        vec!["hbar", "check", "tolerance", "measured", "passed", "note"],
    );
    for r in reports {
        for c in &r.checks {
            t.push(vec![
                r.params.hbar.into(),
                c.name.clone().into(),
                c.tolerance.into(),
                c.measured.into(),
                c.passed.into(),
                c.note.clone().map_or(Cell::Empty, Cell::Text),
            ]);
        }
    }
    t
}
