//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::{Path, PathBuf};

use beamsym::reduction::Transcription;
use beamsym::{
    AlgebraElement, CaseKind, CaseParams, ChiSpec, EpsilonVector, Family, FreeParams, Window,
};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiKind {
    Linear,
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    /// phi = x, psi = -1
    Line,
    /// phi = 0.7 t, psi = 0
    Drift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranscriptionArg {
    Corrected,
    Printed,
}

/// Every option, as a flag or as a key of the `--config` file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Opts {
    /// JSON file with any of these options; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_parser = ["equal", "greater", "less"])]
    pub case: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub rho1: Option<f64>,
    #[arg(long)]
    pub rho2: Option<f64>,
    #[arg(short = 'k', long = "k")]
    pub k: Option<f64>,
    #[arg(short = 'b', long = "b")]
    pub b: Option<f64>,
    /// Damping; the case is inferred and checked against --case
    #[arg(short = 'd', long = "d")]
    pub d: Option<f64>,

    /// Classifier zero tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Eight coefficients a1..a8
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub element: Option<Vec<f64>>,
    /// Eight group parameters eps1..eps8
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eps: Option<Vec<f64>>,

    /// t0,t1,x0,x1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    /// nt,nx (convergence studies start from nt points per axis)
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Refinement levels of a convergence study
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum)]
    pub chi: Option<ChiKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub c3: Option<f64>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Closed-form example 1, 2 or 3
    #[arg(long)]
    pub example: Option<u8>,
    /// Grid CSV written by `transform --out`
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Exact base solution
    #[arg(long, value_enum)]
    pub base: Option<Base>,
    /// Reduction row, e.g. greater/C
    #[arg(long)]
    pub row: Option<String>,
    #[arg(long, value_enum)]
    pub transcription: Option<TranscriptionArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Integration constants c1..c4 of an example
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub constants: Option<Vec<f64>>,
    /// Z(0), Z'(0), W(0), W'(0) at the start of the zeta range
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ics: Option<Vec<f64>>,
    /// Fixed RK4 step in zeta
    #[arg(long)]
    pub step: Option<f64>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        Opts { config: None, $($f: $flags.$f.or($file.$f)),* }
    };
}

impl Opts {
    /// Merge with the config file, if any.
    pub fn resolve(self) -> Result<Opts, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_file(&path)?;
        Ok(overlay!(
            self,
            file,
            case,
            lambda,
            mu,
            rho1,
            rho2,
            k,
            b,
            d,
            tol,
            element,
            eps,
            window,
            grid,
            levels,
            chi,
            c3,
            out,
            format,
            example,
            input,
            base,
            row,
            transcription,
            alpha,
            beta,
            gamma,
            constants,
            ics,
            step
        ))
    }

    pub fn params(&self) -> Result<CaseParams, CliError> {
        let rho1 = self.rho1.unwrap_or(1.0);
        let rho2 = self.rho2.unwrap_or(1.0);
        let k = self.k.unwrap_or(1.0);
        let b = self.b.unwrap_or(1.0);
        if let Some(d) = self.d {
            let p = CaseParams::from_damping(rho1, rho2, k, d, b)?;
            if let Some(c) = &self.case {
                if p.family().name() != c {
                    return Err(CliError::config(
                        "d",
                        format!(
                            "d = {d} puts the system in the {} case, not {c}",
                            p.family()
                        ),
                    ));
                }
            }
            return Ok(p);
        }
        let kind = match self.case.as_deref().unwrap_or("equal") {
            "equal" => CaseKind::Equal,
            "greater" => CaseKind::Greater {
                lambda: self.lambda.unwrap_or(1.0),
            },
            "less" => CaseKind::Less {
                mu: self.mu.unwrap_or(1.0),
            },
            other => return Err(CliError::config("case", format!("unknown case `{other}`"))),
        };
        Ok(CaseParams::from_case(rho1, rho2, k, b, kind)?)
    }

    pub fn tol(&self) -> Result<f64, CliError> {
        let t = self.tol.unwrap_or(beamsym::optimal::DEFAULT_TOL);
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::config(
                "tol",
                format!("must be positive, got {t}"),
            ));
        }
        Ok(t)
    }

    pub fn element(&self) -> Result<AlgebraElement, CliError> {
        let v = self
            .element
            .as_ref()
            .ok_or_else(|| CliError::config("element", "required"))?;
        Ok(AlgebraElement::from_slice(v)?)
    }

    pub fn eps(&self) -> Result<Option<EpsilonVector>, CliError> {
        match &self.eps {
            None => Ok(None),
            Some(v) => EpsilonVector::from_slice(v)
                .map(Some)
                .map_err(CliError::from),
        }
    }

    pub fn window(&self) -> Result<Window, CliError> {
        match self.window.as_deref() {
            None => Ok(Window::unit()),
            Some(&[t0, t1, x0, x1]) => Ok(Window::new(t0, t1, x0, x1)?),
            Some(v) => Err(CliError::config(
                "window",
                format!("expected t0,t1,x0,x1, got {} values", v.len()),
            )),
        }
    }

    pub fn grid(&self) -> Result<(usize, usize), CliError> {
        match self.grid.as_deref() {
            None => Ok((51, 51)),
            Some(&[nt, nx]) if nt >= 5 && nx >= 5 => Ok((nt, nx)),
            Some(&[nt, nx]) => Err(CliError::config(
                "grid",
                format!("need at least 5 points per axis, got {nt},{nx}"),
            )),
            Some(v) => Err(CliError::config(
                "grid",
                format!("expected nt,nx, got {} values", v.len()),
            )),
        }
    }

    /// Coarsest level and level count of a convergence study.
    pub fn study(&self) -> Result<(usize, usize), CliError> {
        let (nt, nx) = self.grid()?;
        if nt != nx {
            return Err(CliError::config(
                "grid",
                "convergence studies refine a square grid; use nt = nx",
            ));
        }
        let levels = self.levels.unwrap_or(3);
        if !(3..=6).contains(&levels) {
            return Err(CliError::config(
                "levels",
                format!("expected 3..=6, got {levels}"),
            ));
        }
        Ok((nt, levels))
    }

    pub fn chi(&self, p: &CaseParams) -> Result<ChiSpec, CliError> {
        let chi = match self.chi.unwrap_or(ChiKind::Cubic) {
            ChiKind::Linear => {
                if self.c3.is_some_and(|c| c != 0.0) {
                    return Err(CliError::config("c3", "only meaningful with --chi cubic"));
                }
                ChiSpec::linear(p.b)
            }
            ChiKind::Cubic => ChiSpec::cubic(p.b, self.c3.unwrap_or(0.3)),
        };
        chi.validate()?;
        Ok(chi)
    }

    pub fn free_params(&self) -> FreeParams {
        FreeParams::new(self.alpha, self.beta, self.gamma)
    }

    pub fn transcription(&self) -> Transcription {
        match self.transcription {
            Some(TranscriptionArg::Printed) => Transcription::Printed,
            _ => Transcription::Corrected,
        }
    }

    pub fn four(
        &self,
        field: &'static str,
        v: &Option<Vec<f64>>,
        default: [f64; 4],
    ) -> Result<[f64; 4], CliError> {
        match v.as_deref() {
            None => Ok(default),
            Some(&[a, b, c, d]) if [a, b, c, d].iter().all(|x| x.is_finite()) => Ok([a, b, c, d]),
            Some(s) if s.len() == 4 => Err(CliError::config(field, "non-finite value")),
            Some(s) => Err(CliError::config(
                field,
                format!("expected 4 values, got {}", s.len()),
            )),
        }
    }

    pub fn step(&self) -> Result<f64, CliError> {
        let h = self.step.unwrap_or(1e-3);
        if !(h.is_finite() && h > 0.0 && h <= 0.1) {
            return Err(CliError::config(
                "step",
                format!("expected 0 < step <= 0.1, got {h}"),
            ));
        }
        Ok(h)
    }

    pub fn family_hint(&self) -> Option<Family> {
        self.case.as_deref().and_then(Family::parse)
    }
}

fn read_file(path: &Path) -> Result<Opts, CliError> {
    let err = |reason: String| CliError::ConfigFile {
        path: path.display().to_string(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let mut opts: Opts = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    // relative paths in the file are relative to the file
    let dir = path.parent().unwrap_or(Path::new("."));
    for p in [&mut opts.out, &mut opts.input].into_iter().flatten() {
        if p.is_relative() {
            *p = dir.join(&*p);
        }
    }
    Ok(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("run.json");
        std::fs::write(
            &f,
            r#"{"case": "greater", "lambda": 2.0, "k": 3.0, "out": "g.csv"}"#,
        )
        .unwrap();
        let flags = Opts {
            config: Some(f),
            k: Some(1.5),
            ..Default::default()
        };
        let o = flags.resolve().unwrap();
        assert_eq!(o.k, Some(1.5));
        assert_eq!(o.lambda, Some(2.0));
        assert_eq!(o.out.unwrap(), dir.path().join("g.csv"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("bad.json");
        std::fs::write(&f, r#"{"kappa": 1}"#).unwrap();
        let o = Opts {
            config: Some(f),
            ..Default::default()
        };
        assert!(matches!(o.resolve(), Err(CliError::ConfigFile { .. })));
    }

    #[test]
    fn damping_must_match_case() {
        let o = Opts {
            case: Some("less".into()),
            d: Some(3.0),
            ..Default::default()
        };
        assert!(matches!(
            o.params(),
            Err(CliError::Config { field: "d", .. })
        ));
        let p = Opts::default().params().unwrap();
        assert_eq!(p.d, 2.0);
    }
}
