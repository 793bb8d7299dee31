//! Interned complex edge weights.
//!
//! Every weight that appears in a diagram is stored once in an [`AmpTable`]
//! and referred to by a compact [`Amplitude`] handle. Two values closer than
//! the table tolerance share a handle, so handle equality doubles as the
//! approximate float comparison that keeps structurally equal diagrams
//! canonical.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

pub const DEFAULT_TOLERANCE: f64 = 1e-13;

/// Handle into an [`AmpTable`]. Handles are only meaningful together with
/// the table that produced them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Amplitude(u32);

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude(0);
    pub const ONE: Amplitude = Amplitude(1);

    pub fn is_zero(self) -> bool {
        self == Amplitude::ZERO
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AmpError {
    #[error("non-finite amplitude ({re}, {im})")]
    NonFinite { re: f64, im: f64 },
    #[error("division by zero amplitude")]
    DivisionByZero,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

/// Growing table of interned complex values.
///
/// Lookup buckets the plane into tolerance-sized cells keyed by
/// `(floor(re/tol), floor(im/tol))` and probes the 3x3 cell neighborhood, so
/// any stored value within `tol` per component is found in O(1). The first
/// value interned in a region claims it; entries are never mutated. Handles
/// 0 and 1 are pre-seeded with the canonical zero and one.
pub struct AmpTable {
    tol: f64,
    values: Vec<Complex64>,
    buckets: FxHashMap<(i64, i64), u32>,
}

impl AmpTable {
    pub fn new(tol: f64) -> Result<Self, AmpError> {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(AmpError::BadTolerance(tol));
        }
        let mut table = AmpTable {
            tol,
            values: Vec::new(),
            buckets: FxHashMap::default(),
        };
        let zero = table.intern(0.0, 0.0).expect("zero is finite");
        let one = table.intern(1.0, 0.0).expect("one is finite");
        assert_eq!(zero, Amplitude::ZERO);
        assert_eq!(one, Amplitude::ONE);
        Ok(table)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, a: Amplitude) -> Complex64 {
        self.values[a.index()]
    }

    fn cell(&self, x: f64) -> i64 {
        (x / self.tol).floor() as i64
    }

    /// Returns the handle of an existing value within `tol` per component,
    /// or stores the value under a fresh handle.
    pub fn intern(&mut self, re: f64, im: f64) -> Result<Amplitude, AmpError> {
        if !re.is_finite() || !im.is_finite() {
            return Err(AmpError::NonFinite { re, im });
        }
        let (cr, ci) = (self.cell(re), self.cell(im));
        for dr in -1..=1i64 {
            for di in -1..=1i64 {
                if let Some(&id) = self.buckets.get(&(cr + dr, ci + di)) {
                    let v = self.values[id as usize];
                    if (v.re - re).abs() <= self.tol && (v.im - im).abs() <= self.tol {
                        return Ok(Amplitude(id));
                    }
                }
            }
        }
        let id = self.values.len() as u32;
        self.values.push(Complex64::new(re, im));
        // A fresh value can share a cell with an older one only when the cell
        // coordinate saturated at the i64 range; keep the first claim.
        self.buckets.entry((cr, ci)).or_insert(id);
        Ok(Amplitude(id))
    }

    pub fn intern_complex(&mut self, v: Complex64) -> Result<Amplitude, AmpError> {
        self.intern(v.re, v.im)
    }

    pub fn mul(&mut self, a: Amplitude, b: Amplitude) -> Amplitude {
        if a.is_zero() || b.is_zero() {
            return Amplitude::ZERO;
        }
        if a == Amplitude::ONE {
            return b;
        }
        if b == Amplitude::ONE {
            return a;
        }
        let p = self.value(a) * self.value(b);
        self.intern(p.re, p.im)
            .expect("product of interned amplitudes is finite")
    }

    pub fn add(&mut self, a: Amplitude, b: Amplitude) -> Amplitude {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let s = self.value(a) + self.value(b);
        self.intern(s.re, s.im)
            .expect("sum of interned amplitudes is finite")
    }

    pub fn div(&mut self, a: Amplitude, b: Amplitude) -> Result<Amplitude, AmpError> {
        if b.is_zero() {
            return Err(AmpError::DivisionByZero);
        }
        if a.is_zero() {
            return Ok(Amplitude::ZERO);
        }
        if b == Amplitude::ONE {
            return Ok(a);
        }
        let q = self.value(a) / self.value(b);
        self.intern(q.re, q.im)
    }
}
