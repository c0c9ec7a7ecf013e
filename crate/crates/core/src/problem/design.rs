use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every link length a model may expose as a decision variable, in canonical
/// order. The first six are always optimized; the last three only in
/// nine-variable mode.
pub const ALL_VARIABLES: [&str; 9] = ["BC", "CD", "DE", "EF", "FG", "GH", "BK", "CI", "EJ"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DvMode {
    #[serde(rename = "6dv")]
    Six,
    #[serde(rename = "9dv")]
    Nine,
}

impl DvMode {
    pub fn len(self) -> usize {
        match self {
            DvMode::Six => 6,
            DvMode::Nine => 9,
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn variables(self) -> &'static [&'static str] {
        &ALL_VARIABLES[..self.len()]
    }

    pub fn from_len(n: usize) -> Option<Self> {
        match n {
            6 => Some(DvMode::Six),
            9 => Some(DvMode::Nine),
            _ => None,
        }
    }
}

impl fmt::Display for DvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DvMode::Six => "6dv",
            DvMode::Nine => "9dv",
        })
    }
}

/// Candidate link lengths in mm, in [`ALL_VARIABLES`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DesignVector {
    values: Vec<f64>,
}

impl DesignVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if DvMode::from_len(values.len()).is_none() {
            return Err(Error::InvalidParameter(format!(
                "a design has 6 or 9 lengths, got {}",
                values.len()
            )));
        }
        for (name, v) in ALL_VARIABLES.iter().zip(&values) {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::InvalidParameter(format!("length {name} must be positive, got {v}")));
            }
        }
        Ok(DesignVector { values })
    }

    /// Builds a design from `(name, value)` pairs. The names must be exactly
    /// the six or nine variables of a mode, in any order.
    pub fn from_named<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut slots = [None; 9];
        for (name, value) in pairs {
            let i = ALL_VARIABLES
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::ModelMismatch(format!("unknown link {name}")))?;
            if slots[i].replace(value).is_some() {
                return Err(Error::InvalidParameter(format!("link {name} given twice")));
            }
        }
        let n = slots.iter().take_while(|s| s.is_some()).count();
        if slots[n..].iter().any(Option::is_some) || DvMode::from_len(n).is_none() {
            return Err(Error::InvalidParameter(
                "a design names either BC..GH or BC..EJ".into(),
            ));
        }
        DesignVector::new(slots[..n].iter().map(|s| s.unwrap()).collect())
    }

    pub fn mode(&self) -> DvMode {
        DvMode::from_len(self.values.len()).expect("length checked on construction")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        ALL_VARIABLES.iter().copied().zip(self.values.iter().copied())
    }

    /// The six shared variables, dropping BK, CI and EJ if present.
    pub fn truncated_to_six(&self) -> DesignVector {
        DesignVector {
            values: self.values[..6].to_vec(),
        }
    }
}

impl TryFrom<Vec<f64>> for DesignVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        DesignVector::new(v)
    }
}

impl From<DesignVector> for Vec<f64> {
    fn from(d: DesignVector) -> Vec<f64> {
        d.values
    }
}

impl fmt::Display for DesignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

/// Lexicographic order on gene vectors under `f64::total_cmp`.
pub fn cmp_genes(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Box bounds on a real-valued search space. The linkage problem uses the
/// named six- and nine-variable sets; surrogate problems may use any names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignBounds {
    pub names: Vec<String>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

const LOWER: [f64; 9] = [38.0, 10.0, 15.0, 15.0, 20.0, 64.0, 20.0, 10.0, 20.0];
const UPPER: [f64; 9] = [60.0, 30.0, 51.0, 51.0, 56.0, 100.0, 50.0, 17.0, 50.0];

impl DesignBounds {
    pub fn new(names: Vec<String>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if names.is_empty() || names.len() != lower.len() || names.len() != upper.len() {
            return Err(Error::InvalidParameter(
                "bounds need matching, non-empty name/lower/upper lists".into(),
            ));
        }
        for ((n, lo), hi) in names.iter().zip(&lower).zip(&upper) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!("bounds for {n}: need lower < upper, got [{lo}, {hi}]")));
            }
        }
        Ok(DesignBounds { names, lower, upper })
    }

    /// Six-variable bounds of the first experiment.
    pub fn six_dv() -> Self {
        Self::for_mode(DvMode::Six)
    }

    /// Nine-variable bounds of the second experiment.
    pub fn nine_dv() -> Self {
        Self::for_mode(DvMode::Nine)
    }

    pub fn for_mode(mode: DvMode) -> Self {
        let n = mode.len();
        DesignBounds {
            names: ALL_VARIABLES[..n].iter().map(|s| s.to_string()).collect(),
            lower: LOWER[..n].to_vec(),
            upper: UPPER[..n].to_vec(),
        }
    }

    /// `dim` variables named `x0..`, all in `[lo, hi]`.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(
            (0..dim).map(|i| format!("x{i}")).collect(),
            vec![lo; dim],
            vec![hi; dim],
        )
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn mode(&self) -> Option<DvMode> {
        let mode = DvMode::from_len(self.dim())?;
        (self.names.iter().map(String::as_str).eq(mode.variables().iter().copied())).then_some(mode)
    }

    pub fn contains(&self, genes: &[f64]) -> bool {
        genes.len() == self.dim()
            && genes
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Rejects vectors of the wrong length or with any coordinate outside.
    pub fn check(&self, genes: &[f64]) -> Result<()> {
        if genes.len() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} variables, got {}",
                self.dim(),
                genes.len()
            )));
        }
        for (i, &x) in genes.iter().enumerate() {
            if !(self.lower[i] <= x && x <= self.upper[i]) {
                return Err(Error::OutOfBounds {
                    name: self.names[i].clone(),
                    value: x,
                    lower: self.lower[i],
                    upper: self.upper[i],
                });
            }
        }
        Ok(())
    }

    pub fn clamp_gene(&self, i: usize, x: f64) -> f64 {
        x.clamp(self.lower[i], self.upper[i])
    }

    pub fn clamp(&self, genes: &mut [f64]) {
        for (i, x) in genes.iter_mut().enumerate() {
            *x = self.clamp_gene(i, *x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_and_names() {
        assert_eq!(DvMode::Six.variables(), &["BC", "CD", "DE", "EF", "FG", "GH"]);
        assert_eq!(DvMode::Nine.len(), 9);
        assert_eq!(DesignBounds::six_dv().mode(), Some(DvMode::Six));
        assert_eq!(DesignBounds::uniform(6, -1.0, 1.0).unwrap().mode(), None);
    }

    #[test]
    fn design_validation() {
        assert!(DesignVector::new(vec![1.0; 7]).is_err());
        assert!(DesignVector::new(vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.0]).is_err());
        let d = DesignVector::from_named([("GH", 6.0), ("BC", 1.0), ("CD", 2.0), ("DE", 3.0), ("EF", 4.0), ("FG", 5.0)]).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(d.get("FG"), Some(5.0));
        assert!(matches!(DesignVector::from_named([("XY", 1.0)]), Err(Error::ModelMismatch(_))));
        assert!(DesignVector::from_named(ALL_VARIABLES[..5].iter().map(|n| (*n, 1.0))).is_err());
    }

    #[test]
    fn serde_round_trip_rejects_bad_lengths() {
        let d = DesignVector::new(vec![58.0, 10.0, 15.0, 51.0, 56.0, 100.0]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<DesignVector>(&s).unwrap(), d);
        assert!(serde_json::from_str::<DesignVector>("[1, 2]").is_err());
    }

    #[test]
    fn bounds_check_and_clamp() {
        let b = DesignBounds::nine_dv();
        assert_eq!(b.lower[8], 20.0);
        assert_eq!(b.upper[7], 17.0);
        let mut g = vec![37.0, 10.0, 15.0, 15.0, 20.0, 64.0, 20.0, 10.0, 51.0];
        assert!(matches!(b.check(&g), Err(Error::OutOfBounds { ref name, .. }) if name == "BC"));
        b.clamp(&mut g);
        assert!(b.contains(&g));
        assert_eq!(g[0], 38.0);
        assert_eq!(g[8], 50.0);
        assert!(DesignBounds::new(vec!["a".into()], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn lexicographic_genes() {
        assert_eq!(cmp_genes(&[1.0, 2.0], &[1.0, 3.0]), Ordering::Less);
        assert_eq!(cmp_genes(&[2.0, 0.0], &[1.0, 3.0]), Ordering::Greater);
        assert_eq!(cmp_genes(&[1.0, 2.0], &[1.0, 2.0]), Ordering::Equal);
    }
}
