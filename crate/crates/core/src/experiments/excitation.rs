use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{HysteresisError, Result};
use crate::material::FieldVector;

/// Where an excitation sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationKind {
    /// `500·(sin(5πt/2), 0)`.
    Uni,
    /// `H_m(t)·(sin 5πt, cos 5πt)` with `H_m(t) = 500·min(t, 0.75)`.
    Rot,
    /// Samples read from a file.
    File,
}

impl fmt::Display for ExcitationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExcitationKind::Uni => "uni",
            ExcitationKind::Rot => "rot",
            ExcitationKind::File => "file",
        })
    }
}

impl FromStr for ExcitationKind {
    type Err = HysteresisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uni" => Ok(ExcitationKind::Uni),
            "rot" => Ok(ExcitationKind::Rot),
            "file" => Ok(ExcitationKind::File),
            other => Err(HysteresisError::InvalidParameter(format!("unknown excitation '{other}'"))),
        }
    }
}

/// `t_i = i/(N−1)` on `[0, 1]`; a single sample sits at `t = 0`.
pub fn time_at(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i < n {
        Ok(())
    } else {
        Err(HysteresisError::Sequence(format!("sample index {i} out of range for {n} samples")))
    }
}

pub fn excitation_uni(i: usize, n: usize) -> Result<FieldVector<2>> {
    check_index(i, n)?;
    let t = time_at(i, n);
    Ok(FieldVector::<2>::new(500.0 * (2.5 * PI * t).sin(), 0.0))
}

pub fn excitation_rot(i: usize, n: usize) -> Result<FieldVector<2>> {
    check_index(i, n)?;
    let t = time_at(i, n);
    let amplitude = 500.0 * t.min(0.75);
    Ok(FieldVector::<2>::new((5.0 * PI * t).sin(), (5.0 * PI * t).cos()) * amplitude)
}

/// Input samples at equidistant times on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationSequence<const D: usize> {
    pub kind: ExcitationKind,
    pub samples: Vec<FieldVector<D>>,
}

impl ExcitationSequence<2> {
    pub fn uni(n: usize) -> Self {
        ExcitationSequence {
            kind: ExcitationKind::Uni,
            samples: (0..n).map(|i| excitation_uni(i, n).expect("index in range")).collect(),
        }
    }

    pub fn rot(n: usize) -> Self {
        ExcitationSequence {
            kind: ExcitationKind::Rot,
            samples: (0..n).map(|i| excitation_rot(i, n).expect("index in range")).collect(),
        }
    }

    /// Builds a uni or rot sequence; `File` sequences come from [`ExcitationSequence::from_samples`].
    pub fn generate(kind: ExcitationKind, n: usize) -> Result<Self> {
        match kind {
            ExcitationKind::Uni => Ok(Self::uni(n)),
            ExcitationKind::Rot => Ok(Self::rot(n)),
            ExcitationKind::File => Err(HysteresisError::InvalidParameter(
                "file excitations must be loaded, not generated".into(),
            )),
        }
    }
}

impl<const D: usize> ExcitationSequence<D> {
    pub fn from_samples(samples: Vec<FieldVector<D>>) -> Self {
        ExcitationSequence {
            kind: ExcitationKind::File,
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.samples.len();
        (0..n).map(move |i| time_at(i, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_at_zero() {
        assert_eq!(excitation_uni(0, 500).unwrap(), FieldVector::<2>::zeros());
        assert_eq!(excitation_rot(0, 500).unwrap(), FieldVector::<2>::zeros());
    }

    #[test]
    fn rot_at_t_point_eight() {
        // t = 0.8 at i = 4 of N = 6
        let h = excitation_rot(4, 6).unwrap();
        assert!((time_at(4, 6) - 0.8).abs() < 1e-15);
        assert!(h[0].abs() < 1e-12);
        assert!((h[1] - 375.0).abs() < 1e-12);
    }

    #[test]
    fn uni_reaches_peaks() {
        // t = 0.2: sin(π/2) = 1
        let h = excitation_uni(1, 6).unwrap();
        assert!((h[0] - 500.0).abs() < 1e-12);
        let end = excitation_uni(499, 500).unwrap();
        assert!((end[0] - 500.0).abs() < 1e-9);
    }

    #[test]
    fn index_out_of_range() {
        assert!(excitation_uni(500, 500).is_err());
        assert!(excitation_rot(3, 3).is_err());
    }

    #[test]
    fn sequence_times() {
        let seq = ExcitationSequence::uni(5);
        let t: Vec<f64> = seq.times().collect();
        assert_eq!(t, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(ExcitationSequence::rot(1).samples.len(), 1);
        assert!(ExcitationSequence::generate(ExcitationKind::File, 3).is_err());
        assert_eq!("rot".parse::<ExcitationKind>().unwrap(), ExcitationKind::Rot);
    }
}
