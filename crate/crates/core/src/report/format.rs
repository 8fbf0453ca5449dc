//! Human-readable numbers and state labels.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::quantum::entanglement_partition;
use crate::tensor::{hermitian_eig, partial_trace, CVector, DensityMatrix, Tolerance};

/// Six significant digits, shortest form; `inf` for infinity.
pub fn fmt_number(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("valid float");
    format!("{rounded}")
}

fn fmt_coefficient(z: Complex64) -> String {
    let tidy = |x: f64| {
        format!("{:.3}", x)
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    };
    if z.im.abs() < 1e-9 {
        tidy(z.re)
    } else if z.re.abs() < 1e-9 {
        format!("{}i", tidy(z.im))
    } else {
        format!(
            "({}{}{}i)",
            tidy(z.re),
            if z.im < 0.0 { "-" } else { "+" },
            tidy(z.im.abs())
        )
    }
}

const NAMED: [(&str, [(f64, f64); 2]); 6] = [
    ("0", [(1.0, 0.0), (0.0, 0.0)]),
    ("1", [(0.0, 0.0), (1.0, 0.0)]),
    ("+", [(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)]),
    ("−", [(FRAC_1_SQRT_2, 0.0), (-FRAC_1_SQRT_2, 0.0)]),
    ("+i", [(FRAC_1_SQRT_2, 0.0), (0.0, FRAC_1_SQRT_2)]),
    ("−i", [(FRAC_1_SQRT_2, 0.0), (0.0, -FRAC_1_SQRT_2)]),
];

fn named_qubit(v: &CVector, tol: f64) -> Option<&'static str> {
    NAMED.iter().find_map(|(name, amps)| {
        let w = CVector::from_vec(amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
        (w.dotc(v).norm_sqr() > 1.0 - tol.max(1e-9)).then_some(*name)
    })
}

/// Label for a ket on qubits: a product of named single-qubit states such as
/// `|−+⟩` when possible, otherwise its computational-basis expansion.
pub fn ket_label(v: &CVector, tol: f64) -> String {
    let n = v.len().trailing_zeros() as usize;
    if n > 0 {
        if let Ok(rho) = DensityMatrix::from_pure(vec![2; n], v, 1e-6) {
            if let Some(names) = product_names(&rho, n, tol) {
                return format!("|{}⟩", names.concat());
            }
        }
    }
    let mut out = String::new();
    for (i, z) in v.iter().enumerate() {
        if z.norm() < 1e-9 {
            continue;
        }
        let coeff = fmt_coefficient(*z);
        let (sign, body) = match coeff.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", coeff),
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        let basis = format!("{i:0n$b}", n = n.max(1));
        out.push_str(&format!("{body}|{basis}⟩"));
    }
    out
}

fn product_names(rho: &DensityMatrix, n: usize, tol: f64) -> Option<Vec<&'static str>> {
    let tolerance = Tolerance::uniform(tol.max(1e-9));
    let blocks = entanglement_partition(rho, tolerance).ok()?;
    if blocks.len() != n {
        return None;
    }
    (0..n)
        .map(|q| {
            let r = partial_trace(rho, &[q]).ok()?;
            let eig = hermitian_eig(r.matrix(), tolerance).ok()?;
            named_qubit(&eig.vector(0), tol)
        })
        .collect()
}

/// Label for a (possibly mixed) mechanism state.
pub(crate) fn density_label(rho: &DensityMatrix, tol: f64) -> Result<String> {
    if rho.is_pure(tol.max(1e-9)) {
        let eig = hermitian_eig(rho.matrix(), Tolerance::uniform(tol))?;
        return Ok(ket_label(&eig.vector(0), tol));
    }
    let d = rho.dim() as f64;
    let mixed = (rho.matrix() - crate::tensor::CMatrix::identity(rho.dim(), rho.dim()).scale(1.0 / d)).norm();
    if mixed < tol.max(1e-9) {
        return Ok(format!("I/{}", rho.dim()));
    }
    let eig = hermitian_eig(rho.matrix(), Tolerance::uniform(tol))?;
    let terms: Vec<String> = (0..eig.len())
        .filter(|&i| eig.values[i] > tol)
        .map(|i| {
            let ket = ket_label(&eig.vector(i), tol);
            if ket.starts_with('|') {
                format!("{} {ket}", fmt_number(eig.values[i]))
            } else {
                format!("{} ({ket})", fmt_number(eig.values[i]))
            }
        })
        .collect();
    Ok(format!("mix({})", terms.join(", ")))
}
