//! Run configuration: a TOML file merged under command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use twocenter_core::groundstates::GridSpec;
use twocenter_core::{ModelParams, WType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// One value or a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub hbar: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// I, IIa or IIb.
    #[arg(long, global = true)]
    pub wtype: Option<String>,
    /// Type I family constants.
    #[arg(long, global = true)]
    pub c1: Option<f64>,
    #[arg(long, global = true)]
    pub c2: Option<f64>,
    /// Type II sign bits, as `a,b`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub signs: Option<Vec<u8>>,
    /// Sector: 0, 1 or 2 for `potential`; + or - for `spectrum`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sector: Option<String>,
    /// Ground-state kind for `norm` and `density`, e.g. bosonic_i.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// x1_min,x1_max,x2_min,x2_max,nx,ny
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    hbar: Option<HbarValue>,
    delta: Option<f64>,
    kappa: Option<f64>,
    wtype: Option<String>,
    c1: Option<f64>,
    c2: Option<f64>,
    signs: Option<[u8; 2]>,
    sector: Option<String>,
    kind: Option<String>,
    grid: Option<[f64; 6]>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum HbarValue {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Parameters at the first `ħ̄`.
    pub params: ModelParams,
    pub hbar_list: Vec<f64>,
    pub sector: Option<String>,
    pub kind: Option<String>,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn params_at(&self, hbar: f64) -> Result<ModelParams> {
        Ok(self.params.with_hbar(hbar)?)
    }

    /// The single `ħ̄` of a command that does not sweep.
    pub fn single_hbar(&self) -> Result<f64> {
        match self.hbar_list.as_slice() {
            [h] => Ok(*h),
            _ => bail!("this command takes a single --hbar value"),
        }
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(p) => read_file(p)?,
        None => FileConfig::default(),
    };
    let hbar_list = match (&args.hbar, file.hbar) {
        (Some(v), _) => v.clone(),
        (None, Some(HbarValue::One(h))) => vec![h],
        (None, Some(HbarValue::Many(v))) => v,
        (None, None) => vec![1.0],
    };
    if hbar_list.is_empty() {
        bail!("hbar list is empty");
    }
    let wtype: WType = args
        .wtype
        .clone()
        .or(file.wtype)
        .unwrap_or_else(|| "I".into())
        .parse()?;
    let delta = args.delta.or(file.delta).unwrap_or(0.5);
    let kappa = args.kappa.or(file.kappa).unwrap_or(match wtype {
        WType::I => 0.0,
        _ => 2.0,
    });
    let params = match wtype {
        WType::I => ModelParams::type_i_family(
            hbar_list[0],
            delta,
            kappa,
            args.c1.or(file.c1).unwrap_or(0.0),
            args.c2.or(file.c2).unwrap_or(0.0),
        )?,
        _ => {
            let [a, b] = match (&args.signs, file.signs) {
                (Some(v), _) => <[u8; 2]>::try_from(v.as_slice())
                    .map_err(|_| anyhow::anyhow!("--signs takes 2 values, got {}", v.len()))?,
                (None, Some(s)) => s,
                (None, None) if wtype == WType::IIa => [0, 0],
                (None, None) => [0, 1],
            };
            let p = ModelParams::type_ii(hbar_list[0], delta, kappa, a, b)?;
            if p.wtype != wtype {
                bail!("sign bits {a},{b} do not give wtype {wtype}");
            }
            p
        }
    };
    for &h in &hbar_list[1..] {
        params.with_hbar(h)?;
    }
    let g = match &args.grid {
        Some(v) => <[f64; 6]>::try_from(v.as_slice())
            .map_err(|_| anyhow::anyhow!("--grid takes 6 values, got {}", v.len()))?,
        None => file.grid.unwrap_or([-3.0, 3.0, -2.0, 2.0, 121.0, 81.0]),
    };
    for n in [g[4], g[5]] {
        if n.fract() != 0.0 || n < 2.0 {
            bail!("grid resolution must be whole numbers >= 2, got {n}");
        }
    }
    let grid = GridSpec::new((g[0], g[1]), (g[2], g[3]), g[4] as usize, g[5] as usize)?;
    Ok(RunConfig {
        params,
        hbar_list,
        sector: args.sector.clone().or(file.sector),
        kind: args.kind.clone().or(file.kind),
        grid,
        out: args.out.clone().or(file.out),
        format: args.format.or(file.format).unwrap_or(Format::Csv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults() {
        let c = resolve(&CommonArgs::default()).unwrap();
        assert_eq!(c.params, ModelParams::type_i(1.0, 0.5).unwrap());
        assert_eq!(c.format, Format::Csv);
        assert_eq!((c.grid.nx, c.grid.ny), (121, 81));
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "hbar = [0.2, 0.4]\ndelta = 1.0\nwtype = \"IIb\"\nkappa = 3.0\nformat = \"json\"").unwrap();
        let args = CommonArgs {
            config: Some(f.path().to_path_buf()),
            delta: Some(0.5),
            ..Default::default()
        };
        let c = resolve(&args).unwrap();
        assert_eq!(c.hbar_list, vec![0.2, 0.4]);
        assert_eq!(c.params.delta, 0.5);
        assert_eq!(c.params.wtype, WType::IIb);
        assert_eq!((c.params.a, c.params.b), (0, 1));
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn rejects_bad_values() {
        let bad_delta = CommonArgs { delta: Some(1.5), ..Default::default() };
        assert!(resolve(&bad_delta).is_err());
        let bad_grid = CommonArgs { grid: Some(vec![0.0, 1.0, 0.0, 1.0, 2.5, 3.0]), ..Default::default() };
        assert!(resolve(&bad_grid).is_err());
        let mismatched = CommonArgs {
            wtype: Some("IIa".into()),
            signs: Some(vec![0, 1]),
            ..Default::default()
        };
        assert!(resolve(&mismatched).is_err());
    }
}
