use super::AInftyError;
use crate::coeff::Ring;
use crate::linalg::{LinalgError, Matrix};

/// Decomposition `C = im d + H + I` of a finite complex with `d: I -> im d`
/// an isomorphism, so that `im d + I` is contractible.
///
/// Vectors are columns over the generator basis. `d` maps column `j` to the
/// column `d.column(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting<R> {
    pub image: Vec<Vec<R>>,
    pub harmonic: Vec<Vec<R>>,
    pub complement: Vec<Vec<R>>,
    /// Contracting homotopy: `h(image_i) = complement_i`, zero on `H` and `I`.
    pub homotopy: Matrix<R>,
    /// Projection onto `H` along `im d + I`.
    pub projection: Matrix<R>,
    change_inv: Matrix<R>,
}

impl<R: Ring> Splitting<R> {
    /// Coordinates in the `H` basis of the class of a cocycle.
    pub fn class_coords(&self, v: &[R]) -> Vec<R> {
        let r = self.image.len();
        let s = self.harmonic.len();
        self.change_inv.mul_vec(v)[r..r + s].to_vec()
    }

    /// Harmonic representative of a class.
    pub fn representative(&self, coords: &[R]) -> Vec<R> {
        let n = self.homotopy.rows();
        let mut out = vec![R::zero(); n];
        for (c, h) in coords.iter().zip(&self.harmonic) {
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                out[i] = out[i].plus(&c.times(&h[i]));
            }
        }
        out
    }
}

fn lin_err(e: LinalgError) -> AInftyError {
    AInftyError::NonFieldCoefficients(e.to_string())
}

fn check_homogeneous<R: Ring>(d: &Matrix<R>, degrees: &[i64]) -> Result<(), AInftyError> {
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            match v.degree() {
                Some(cd) if cd + degrees[i] == degrees[j] + 1 => {}
                Some(_) => {
                    return Err(AInftyError::NonHomogeneousEntries(format!(
                        "entry ({i},{j}) = {v} has the wrong degree"
                    )))
                }
                None => {
                    return Err(AInftyError::NonHomogeneousEntries(format!("entry ({i},{j}) = {v}")))
                }
            }
        }
    }
    Ok(())
}

/// Splits a complex with homogeneous basis (degrees given per generator) and
/// verifies `dh + hd = id - proj_H` exactly.
///
/// Works over any field, and over graded Laurent coefficients where every
/// nonzero homogeneous entry is invertible.
pub fn homogeneous_splitting<R: Ring>(d: &Matrix<R>, degrees: &[i64]) -> Result<Splitting<R>, AInftyError> {
    let n = degrees.len();
    if d.rows() != n || d.cols() != n {
        return Err(AInftyError::InvalidArgument("differential must be square over the basis".into()));
    }
    check_homogeneous(d, degrees)?;
    if !d.mul(d).is_zero() {
        return Err(AInftyError::NotAComplex);
    }
    let (_, pivots) = d.rref().map_err(lin_err)?;
    let complement: Vec<Vec<R>> = pivots
        .iter()
        .map(|&p| {
            let mut e = vec![R::zero(); n];
            e[p] = R::one();
            e
        })
        .collect();
    let image: Vec<Vec<R>> = pivots.iter().map(|&p| d.column(p)).collect();
    let kernel = d.nullspace().map_err(lin_err)?;
    let mut cols = image.clone();
    cols.extend(kernel.iter().cloned());
    let (_, kp) = Matrix::from_columns(n, &cols).rref().map_err(lin_err)?;
    let r = image.len();
    let harmonic: Vec<Vec<R>> = kp.iter().filter(|&&c| c >= r).map(|&c| cols[c].clone()).collect();
    let s = harmonic.len();
    if 2 * r + s != n {
        return Err(AInftyError::NotAComplex);
    }
    let mut basis = image.clone();
    basis.extend(harmonic.iter().cloned());
    basis.extend(complement.iter().cloned());
    let m = Matrix::from_columns(n, &basis);
    let m_inv = m.inverse().map_err(lin_err)?;
    let mut hc = Matrix::zeros(n, n);
    let mut pc = Matrix::zeros(n, n);
    for i in 0..r {
        hc.set(r + s + i, i, R::one());
    }
    for i in 0..s {
        pc.set(r + i, r + i, R::one());
    }
    let homotopy = m.mul(&hc).mul(&m_inv);
    let projection = m.mul(&pc).mul(&m_inv);
    let lhs = d.mul(&homotopy).plus(&homotopy.mul(d));
    let rhs = Matrix::identity(n).minus(&projection);
    if lhs != rhs || !d.mul(&projection).is_zero() {
        return Err(AInftyError::NotAComplex);
    }
    Ok(Splitting { image, harmonic, complement, homotopy, projection, change_inv: m_inv })
}
