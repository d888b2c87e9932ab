//! Singular moduli and Hilbert class polynomials.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{ComplexBall, Mag};
use crate::error::{Error, Result};
use crate::jfunc::{eval_j, MAX_PRECISION};
use crate::poly::IntPoly;
use crate::quadforms::{reduced_forms, Discriminant, ReducedForm};

#[derive(Clone, Debug)]
pub struct SingularModulus {
    pub disc: Discriminant,
    pub form: ReducedForm,
    pub value: ComplexBall,
}

impl SingularModulus {
    /// The unique modulus of largest absolute value, attached to `a = 1`.
    pub fn is_dominant(&self) -> bool {
        self.form.a == 1
    }
}

/// All singular moduli of `disc`, in the order of [`reduced_forms`].
///
/// The value at `(a, −b, c)` is the complex conjugate of the value at
/// `(a, b, c)`, so only forms with `b ≥ 0` are evaluated.
pub fn singular_moduli(disc: Discriminant, prec: u32) -> Result<Vec<SingularModulus>> {
    let forms = reduced_forms(disc);
    let mut values: HashMap<(i64, i64), ComplexBall> = HashMap::new();
    for f in forms.iter().filter(|f| f.b >= 0) {
        values.insert((f.a, f.b), eval_j(f, disc, prec)?);
    }
    Ok(forms
        .into_iter()
        .map(|form| {
            let value = if form.b >= 0 {
                values[&(form.a, form.b)].clone()
            } else {
                values[&(form.a, -form.b)].conj()
            };
            SingularModulus { disc, form, value }
        })
        .collect())
}

/// The singular modulus attached to the form with `a = 1`.
pub fn dominant_value(disc: Discriminant, prec: u32) -> Result<SingularModulus> {
    let form = reduced_forms(disc)[0];
    debug_assert_eq!(form.a, 1);
    Ok(SingularModulus {
        disc,
        form,
        value: eval_j(&form, disc, prec)?,
    })
}

/// Singular moduli whose balls are pairwise disjoint, raising precision
/// until they separate.
pub fn separated_moduli(disc: Discriminant, prec: u32) -> Result<Vec<SingularModulus>> {
    let mut p = prec;
    loop {
        let moduli = singular_moduli(disc, p)?;
        let separated = moduli.iter().enumerate().all(|(i, x)| {
            moduli[i + 1..]
                .iter()
                .all(|y| x.value.is_disjoint(&y.value))
        });
        if separated {
            return Ok(moduli);
        }
        p = p
            .checked_mul(2)
            .filter(|&p| p <= MAX_PRECISION)
            .ok_or_else(|| {
                Error::PrecisionExhausted(format!("moduli of {disc} do not separate"))
            })?;
    }
}

/// Monic `H_Δ` with certified integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub disc: Discriminant,
    poly: IntPoly,
    /// Largest coefficient radius before rounding; `None` when the
    /// polynomial was read back from the cache.
    pub rounding_certificate: Option<RoundingCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundingCertificate {
    /// `log2` of the largest coefficient radius, rounded up; always ≤ −2.
    pub max_radius_log2: i64,
    pub precision_bits: u32,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    /// Coefficients from the leading `1` down to the constant term.
    pub fn coefficients_descending(&self) -> Vec<BigInt> {
        self.poly.coeffs().iter().rev().cloned().collect()
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.poly.coeffs()[0]
    }
}

/// Starting precision for a class polynomial: the coefficients grow like
/// `e^{π√|Δ|·Σ 1/a}`.
pub fn initial_precision(disc: Discriminant) -> u32 {
    let bits = 3.0 * std::f64::consts::PI * (disc.abs() as f64).sqrt() / std::f64::consts::LN_2;
    (bits.ceil() as u32 + 64).max(128)
}

/// Expand `∏(X − xᵢ)` over balls; `out[k]` is the coefficient of `X^k`.
pub fn expand_product(values: &[ComplexBall], prec: u32) -> Vec<ComplexBall> {
    let mut coeffs = vec![ComplexBall::one()];
    for x in values {
        let mut next = vec![ComplexBall::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c, prec);
            next[k] = next[k].sub(&c.mul(x, prec), prec);
        }
        coeffs = next;
    }
    coeffs
}

fn try_round(disc: Discriminant, prec: u32) -> Result<std::result::Result<ClassPolynomial, usize>> {
    let moduli = singular_moduli(disc, prec)?;
    let values: Vec<ComplexBall> = moduli.into_iter().map(|m| m.value).collect();
    let coeffs = expand_product(&values, prec);
    let mut ints = Vec::with_capacity(coeffs.len());
    let mut worst = Mag::ZERO;
    for (k, c) in coeffs.iter().enumerate() {
        match c.unique_integer() {
            Some(n) => ints.push(n),
            None => return Ok(Err(k)),
        }
        worst = worst.max(c.rad);
    }
    let max_radius_log2 = if worst.is_zero() {
        i64::MIN
    } else {
        worst.exponent()
    };
    Ok(Ok(ClassPolynomial {
        disc,
        poly: IntPoly::new(ints),
        rounding_certificate: Some(RoundingCertificate {
            max_radius_log2,
            precision_bits: prec,
        }),
    }))
}

/// `H_Δ` computed from scratch at escalating precision.
pub fn compute_class_polynomial(disc: Discriminant) -> Result<ClassPolynomial> {
    compute_class_polynomial_from(disc, initial_precision(disc))
}

pub fn compute_class_polynomial_from(disc: Discriminant, start: u32) -> Result<ClassPolynomial> {
    let mut prec = start;
    // Raise the start to cover the actual coefficient size.
    let probe = singular_moduli(disc, 64.max(prec.min(256)))?;
    let log_size: f64 = probe
        .iter()
        .map(|m| (m.value.mag_up().to_f64() + 1.0).log2().min(1e9))
        .sum();
    while (prec as f64) < log_size + 64.0 {
        prec *= 2;
    }
    let mut last_index = 0;
    while prec <= MAX_PRECISION {
        match try_round(disc, prec)? {
            Ok(p) => return Ok(p),
            Err(k) => last_index = k,
        }
        prec *= 2;
    }
    Err(Error::RoundingFailed {
        disc: disc.value(),
        bits: MAX_PRECISION,
        index: last_index,
    })
}

/// Shared store of class polynomials, optionally persisted as
/// `<root>/hcp/<|Δ|>.txt` with one coefficient per line, leading first.
///
/// Each key has its own lock, so concurrent requests for one
/// discriminant compute it once while other keys proceed.
#[derive(Debug, Default)]
pub struct ClassPolyCache {
    root: Option<PathBuf>,
    slots: Mutex<HashMap<i64, Arc<Mutex<Option<Arc<ClassPolynomial>>>>>>,
}

impl ClassPolyCache {
    pub fn in_memory() -> Self {
        ClassPolyCache::default()
    }

    pub fn with_dir(root: impl Into<PathBuf>) -> Self {
        ClassPolyCache {
            root: Some(root.into()),
            slots: Mutex::default(),
        }
    }

    fn file_for(&self, disc: Discriminant) -> Option<PathBuf> {
        self.root
            .as_ref()
            .map(|r| r.join("hcp").join(format!("{}.txt", disc.abs())))
    }

    pub fn get(&self, disc: Discriminant) -> Result<Arc<ClassPolynomial>> {
        let slot = {
            let mut slots = self.slots.lock().unwrap();
            slots.entry(disc.value()).or_default().clone()
        };
        let mut guard = slot.lock().unwrap();
        if let Some(p) = guard.as_ref() {
            return Ok(p.clone());
        }
        let poly = match self.file_for(disc) {
            Some(path) if path.exists() => read_cache_file(&path, disc)?,
            Some(path) => {
                let p = compute_class_polynomial(disc)?;
                write_cache_file(&path, &p)?;
                p
            }
            None => compute_class_polynomial(disc)?,
        };
        let poly = Arc::new(poly);
        *guard = Some(poly.clone());
        Ok(poly)
    }
}

/// `H_Δ` through a process-wide in-memory cache.
pub fn hilbert_class_polynomial(disc: Discriminant) -> Result<Arc<ClassPolynomial>> {
    static GLOBAL: std::sync::OnceLock<ClassPolyCache> = std::sync::OnceLock::new();
    GLOBAL.get_or_init(ClassPolyCache::in_memory).get(disc)
}

fn read_cache_file(path: &Path, disc: Discriminant) -> Result<ClassPolynomial> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut desc = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let n: BigInt = line
            .trim()
            .parse()
            .map_err(|_| Error::data(path, format!("bad coefficient {line:?}")))?;
        desc.push(n);
    }
    if desc.first() != Some(&BigInt::one()) {
        return Err(Error::data(path, "leading coefficient is not 1"));
    }
    let h = disc.class_number() as usize;
    if desc.len() != h + 1 {
        return Err(Error::data(
            path,
            format!("degree {} but h({disc}) = {h}", desc.len() - 1),
        ));
    }
    desc.reverse();
    Ok(ClassPolynomial {
        disc,
        poly: IntPoly::new(desc),
        rounding_certificate: None,
    })
}

fn write_cache_file(path: &Path, poly: &ClassPolynomial) -> Result<()> {
    let dir = path.parent().expect("cache file has a parent");
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        for c in poly.coefficients_descending() {
            writeln!(f, "{c}").map_err(|e| Error::io(&tmp, e))?;
        }
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
