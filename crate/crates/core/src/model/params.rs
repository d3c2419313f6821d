use serde::{Deserialize, Serialize};

use super::ModelError;

/// Which superpotential the model is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WType {
    /// Poisson-equation solution; `kappa`, `c1`, `c2` select a member of the family.
    I,
    /// Hamilton-Jacobi solution with equal sign bits.
    IIa,
    /// Hamilton-Jacobi solution with opposite sign bits.
    IIb,
}

impl std::fmt::Display for WType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WType::I => "I",
            WType::IIa => "IIa",
            WType::IIb => "IIb",
        })
    }
}

impl std::str::FromStr for WType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(WType::I),
            "IIa" | "iia" | "2a" => Ok(WType::IIa),
            "IIb" | "iib" | "2b" => Ok(WType::IIb),
            other => Err(ModelError::InvalidParams(format!(
                "unknown superpotential type {other:?} (expected I, IIa or IIb)"
            ))),
        }
    }
}

/// Non-dimensional model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub hbar: f64,
    /// Strength of the left center relative to the right one, in `(0, 1]`.
    pub delta: f64,
    pub wtype: WType,
    /// Separation constant.
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
    /// Sign bit of the `u` part of a Type II superpotential.
    pub a: u8,
    /// Sign bit of the `v` part of a Type II superpotential.
    pub b: u8,
}

impl ModelParams {
    /// Type I with `kappa = c1 = c2 = 0`.
    pub fn type_i(hbar: f64, delta: f64) -> Result<Self, ModelError> {
        Self::type_i_family(hbar, delta, 0.0, 0.0, 0.0)
    }

    pub fn type_i_family(
        hbar: f64,
        delta: f64,
        kappa: f64,
        c1: f64,
        c2: f64,
    ) -> Result<Self, ModelError> {
        let p = ModelParams {
            hbar,
            delta,
            wtype: WType::I,
            kappa,
            c1,
            c2,
            a: 0,
            b: 0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Type II; the subtype follows from the sign bits.
    pub fn type_ii(hbar: f64, delta: f64, kappa: f64, a: u8, b: u8) -> Result<Self, ModelError> {
        let p = ModelParams {
            hbar,
            delta,
            wtype: if a == b { WType::IIa } else { WType::IIb },
            kappa,
            c1: 0.0,
            c2: 0.0,
            a,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_hbar(self, hbar: f64) -> Result<Self, ModelError> {
        let p = ModelParams { hbar, ..self };
        p.validate()?;
        Ok(p)
    }

    /// Admissible separation constants for Type II: `[2(1-δ), 2(1+δ)]`.
    pub fn kappa_window(&self) -> (f64, f64) {
        (2.0 * (1.0 - self.delta), 2.0 * (1.0 + self.delta))
    }

    /// Type I with all family constants zero.
    pub fn is_simple_type_i(&self) -> bool {
        self.wtype == WType::I && self.kappa == 0.0 && self.c1 == 0.0 && self.c2 == 0.0
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidParams(msg));
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return bad(format!("hbar must be positive, got {}", self.hbar));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad(format!("delta must lie in (0, 1], got {}", self.delta));
        }
        if !(self.kappa.is_finite() && self.c1.is_finite() && self.c2.is_finite()) {
            return bad("kappa, c1 and c2 must be finite".into());
        }
        match self.wtype {
            WType::I => Ok(()),
            WType::IIa | WType::IIb => {
                if self.a > 1 || self.b > 1 {
                    return bad(format!("sign bits must be 0 or 1, got a={} b={}", self.a, self.b));
                }
                let subtype_ok = (self.wtype == WType::IIa) == (self.a == self.b);
                if !subtype_ok {
                    return bad(format!(
                        "{} requires {} sign bits, got a={} b={}",
                        self.wtype,
                        if self.wtype == WType::IIa { "equal" } else { "different" },
                        self.a,
                        self.b
                    ));
                }
                let (lo, hi) = self.kappa_window();
                if self.kappa < lo || self.kappa > hi {
                    return bad(format!(
                        "kappa = {} outside the admissible window [{lo}, {hi}]",
                        self.kappa
                    ));
                }
                if self.c1 != 0.0 || self.c2 != 0.0 {
                    return bad("c1 and c2 apply to Type I only".into());
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ModelParams::type_i(1.0, 0.5).is_ok());
        assert!(ModelParams::type_i(0.0, 0.5).is_err());
        assert!(ModelParams::type_i(1.0, 0.0).is_err());
        assert!(ModelParams::type_i(1.0, 1.2).is_err());
        assert!(ModelParams::type_i(1.0, 1.0).is_ok());
        let p = ModelParams::type_ii(2.0, 0.5, 3.0, 1, 0).unwrap();
        assert_eq!(p.wtype, WType::IIb);
        assert_eq!(ModelParams::type_ii(2.0, 0.5, 3.0, 1, 1).unwrap().wtype, WType::IIa);
        assert!(ModelParams::type_ii(2.0, 0.5, 0.9, 1, 1).is_err());
        assert!(ModelParams::type_ii(2.0, 0.5, 3.1, 1, 1).is_err());
        assert!(ModelParams::type_ii(2.0, 0.5, 1.0, 1, 1).is_ok());
        let mut q = p;
        q.wtype = WType::IIa;
        assert!(q.validate().is_err());
    }

    #[test]
    fn parse_type() {
        assert_eq!("IIb".parse::<WType>().unwrap(), WType::IIb);
        assert!("III".parse::<WType>().is_err());
    }
}
