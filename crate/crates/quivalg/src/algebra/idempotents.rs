use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::FiniteDimAlgebra;
use crate::error::AlgebraError;
use crate::linalg::{Field, Matrix, QuotientSpace, Scalar, Subspace};

/// A complete system of primitive orthogonal idempotents: the minimal
/// idempotents of A/rad together with their orthogonal idempotent lifts in A
/// (summing to 1 exactly). Both lists share the same order.
#[derive(Clone, Debug)]
pub struct PrimitiveIdempotents {
    /// In A/rad quotient coordinates.
    pub in_quotient: Vec<Vec<Scalar>>,
    /// In A coordinates.
    pub lifts: Vec<Vec<Scalar>>,
}

/// Finds the minimal idempotents of the commutative semisimple quotient A/rad
/// and lifts them to a complete orthogonal system in A.
///
/// Requires A/rad commutative (basicness prerequisite) and split over the
/// session field; both are detected and reported. The quotient is decomposed
/// by refining joint eigenspaces of the multiplication operators of quotient
/// basis elements, with eigenvalues found exactly from minimal polynomials.
pub fn find_primitive_idempotents(
    a: &FiniteDimAlgebra,
    rad: &Subspace,
) -> Result<PrimitiveIdempotents, AlgebraError> {
    let field = a.field();
    let quo = QuotientSpace::of_full(rad.clone());
    let qdim = quo.dim();

    let q_mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        quo.project(&a.mul_vec(&quo.embed(x), &quo.embed(y)))
    };
    let q_basis = |i: usize| -> Vec<Scalar> {
        let mut v = vec![field.zero(); qdim];
        v[i] = field.one();
        v
    };

    for i in 0..qdim {
        for j in (i + 1)..qdim {
            if q_mul(&q_basis(i), &q_basis(j)) != q_mul(&q_basis(j), &q_basis(i)) {
                return Err(AlgebraError::QuotientNotCommutative(i, j));
            }
        }
    }

    // refine joint eigenspaces of left multiplication by each basis element
    let mut components = vec![Subspace::full(field, qdim)];
    for t in 0..qdim {
        let cols: Vec<Vec<Scalar>> = (0..qdim).map(|c| q_mul(&q_basis(t), &q_basis(c))).collect();
        let op = Matrix::from_fn(field, qdim, qdim, |r, c| cols[c][r].clone());
        let mut next = Vec::new();
        for comp in components {
            if comp.dim() <= 1 {
                next.push(comp);
                continue;
            }
            // restrict: comp is op-stable because the quotient is commutative
            let k = comp.dim();
            let mut restricted = Matrix::zeros(field, k, k);
            for (j, row) in comp.basis_rows().enumerate() {
                let image = op.mul_vec(row);
                let coords = comp.coords_of(&image).ok_or_else(|| {
                    AlgebraError::QuotientNotSemisimple(
                        "multiplication operator does not preserve a joint eigenspace".into(),
                    )
                })?;
                for (i, c) in coords.into_iter().enumerate() {
                    restricted.set(i, j, c);
                }
            }
            let eigenvalues = operator_eigenvalues(&restricted)?;
            let mut covered = 0usize;
            let mut pieces = Vec::new();
            for lambda in eigenvalues {
                let shifted = restricted.sub(&Matrix::identity(field, k).scale(&lambda));
                let eigen = shifted.kernel();
                if eigen.dim() == 0 {
                    continue;
                }
                covered += eigen.dim();
                // map back to quotient coordinates
                let rows: Vec<Vec<Scalar>> = eigen
                    .basis_rows()
                    .map(|coords| {
                        let mut v = vec![field.zero(); qdim];
                        for (j, c) in coords.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            for (col, b) in comp.basis_matrix().row(j).iter().enumerate() {
                                v[col] = v[col].add(&c.mul(b));
                            }
                        }
                        v
                    })
                    .collect();
                pieces.push(Subspace::from_rows(field, qdim, rows));
            }
            if covered != k {
                return Err(AlgebraError::QuotientNotSemisimple(format!(
                    "eigenspaces of a multiplication operator cover {covered} of {k} dimensions"
                )));
            }
            next.extend(pieces);
        }
        components = next;
        if components.iter().all(|c| c.dim() == 1) {
            break;
        }
    }
    // the zero algebra has no idempotents and no components
    components.retain(|c| c.dim() > 0);
    if components.iter().any(|c| c.dim() != 1) {
        return Err(AlgebraError::QuotientNotSemisimple(
            "joint eigenspaces of basis multiplications do not separate the quotient".into(),
        ));
    }

    // normalize each line to its idempotent
    let mut quotient_idems = Vec::new();
    for comp in &components {
        let v: Vec<Scalar> = comp.basis_rows().next().unwrap().to_vec();
        let vv = q_mul(&v, &v);
        let pivot = v.iter().position(|c| !c.is_zero()).expect("basis rows are nonzero");
        let c = vv[pivot].clone();
        if c.is_zero() {
            return Err(AlgebraError::QuotientNotSemisimple(
                "a joint eigenline squares to zero".into(),
            ));
        }
        let scaled: Vec<Scalar> = v.iter().map(|x| x.div(&c)).collect();
        if q_mul(&scaled, &scaled) != scaled {
            return Err(AlgebraError::NotSplit(
                "a joint eigenline does not contain an idempotent".into(),
            ));
        }
        quotient_idems.push(scaled);
    }
    quotient_idems.sort();

    // orthogonality and completeness in the quotient
    let mut total = vec![field.zero(); qdim];
    for (i, u) in quotient_idems.iter().enumerate() {
        for (j, w) in quotient_idems.iter().enumerate() {
            let prod = q_mul(u, w);
            let expected = if i == j { u.clone() } else { vec![field.zero(); qdim] };
            if prod != expected {
                return Err(AlgebraError::QuotientNotSemisimple(format!(
                    "quotient idempotents {i} and {j} are not orthogonal"
                )));
            }
        }
        for (t, c) in u.iter().enumerate() {
            total[t] = total[t].add(c);
        }
    }
    if total != quo.project(a.unit()) {
        return Err(AlgebraError::QuotientNotSemisimple(
            "quotient idempotents do not sum to the unit".into(),
        ));
    }

    // lift one at a time inside shrinking corners so orthogonality is exact
    let one = a.unit().to_vec();
    let mut lifted: Vec<Vec<Scalar>> = Vec::new();
    let mut partial = vec![field.zero(); a.dim()];
    for u in &quotient_idems {
        let complement: Vec<Scalar> =
            one.iter().zip(&partial).map(|(o, p)| o.sub(p)).collect();
        let seed = a.mul_vec(&a.mul_vec(&complement, &quo.embed(u)), &complement);
        let f = idempotize(a, seed)?;
        for (t, c) in f.iter().enumerate() {
            partial[t] = partial[t].add(c);
        }
        lifted.push(f);
    }
    if partial != one {
        return Err(AlgebraError::LiftingDiverged);
    }

    Ok(PrimitiveIdempotents { in_quotient: quotient_idems, lifts: lifted })
}

/// Newton-style refinement x ← 3x² − 2x³: squares the radical power modulo
/// which x is idempotent, so it reaches an exact idempotent in O(log n) steps.
fn idempotize(a: &FiniteDimAlgebra, mut x: Vec<Scalar>) -> Result<Vec<Scalar>, AlgebraError> {
    for _ in 0..64 {
        let x2 = a.mul_vec(&x, &x);
        if x2 == x {
            return Ok(x);
        }
        let x3 = a.mul_vec(&x2, &x);
        let three = a.field().from_i64(3);
        let two = a.field().from_i64(2);
        x = x2
            .iter()
            .zip(&x3)
            .map(|(s, c)| three.mul(s).sub(&two.mul(c)))
            .collect();
    }
    Err(AlgebraError::LiftingDiverged)
}

/// All eigenvalues of an exact square matrix, via its minimal polynomial.
fn operator_eigenvalues(m: &Matrix) -> Result<Vec<Scalar>, AlgebraError> {
    let field = m.field();
    match field {
        Field::Rational => rational_eigenvalues(m),
        Field::Prime(p) => {
            let poly = minimal_polynomial(m);
            if p > 1 << 16 {
                return Err(AlgebraError::NotSplit(format!(
                    "eigenvalue scan over GF({p}) exceeds the supported modulus"
                )));
            }
            let mut out = Vec::new();
            for v in 0..p {
                let lambda = field.from_i64(v as i64);
                if eval_poly(&poly, &lambda).is_zero() {
                    out.push(lambda);
                }
            }
            Ok(out)
        }
    }
}

/// Rational eigenvalues: scale the matrix to integer entries, compute the
/// (monic, integer) minimal polynomial, extract its integer roots from the
/// divisors of the constant term, and scale back.
fn rational_eigenvalues(m: &Matrix) -> Result<Vec<Scalar>, AlgebraError> {
    let mut denom_lcm = BigInt::from(1);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if let Scalar::Rat(x) = m.get(r, c) {
                denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
            }
        }
    }
    let scale = Scalar::Rat(num_rational::BigRational::from_integer(denom_lcm.clone()));
    let scaled = m.scale(&scale);
    let poly = minimal_polynomial(&scaled);
    let int_poly: Vec<BigInt> = poly
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => {
                debug_assert!(r.is_integer(), "minimal polynomial of an integer matrix");
                r.to_integer()
            }
            Scalar::Mod { .. } => unreachable!("rational field"),
        })
        .collect();
    let roots = integer_roots(&int_poly).ok_or_else(|| {
        AlgebraError::NotSplit(
            "minimal polynomial of a multiplication operator has an irrational factor or \
             a constant term too large to factor"
                .into(),
        )
    })?;
    Ok(roots
        .into_iter()
        .map(|r| {
            Scalar::Rat(num_rational::BigRational::new(r, denom_lcm.clone()))
        })
        .collect())
}

/// Monic minimal polynomial coefficients [c_0, ..., c_{d-1}, 1].
fn minimal_polynomial(m: &Matrix) -> Vec<Scalar> {
    let field = m.field();
    let n = m.rows();
    let flat = |mat: &Matrix| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            v.extend(mat.row(r).iter().cloned());
        }
        v
    };
    let mut powers = vec![Matrix::identity(field, n)];
    loop {
        let last = powers.last().unwrap().mul(m);
        // columns = flattened powers, solve for the new power
        let cols: Vec<Vec<Scalar>> = powers.iter().map(&flat).collect();
        let sys = Matrix::from_fn(field, n * n, powers.len(), |r, c| cols[c][r].clone());
        if let Some(coeffs) = sys.solve(&flat(&last)) {
            // x^d = Σ coeffs_i x^i  =>  min poly = x^d − Σ coeffs_i x^i
            let mut poly: Vec<Scalar> = coeffs.iter().map(Scalar::neg).collect();
            poly.push(field.one());
            return poly;
        }
        powers.push(last);
    }
}

fn eval_poly(poly: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = x.field().zero();
    for c in poly.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Distinct integer roots of a monic integer polynomial, or `None` when the
/// polynomial does not split into linear factors over the integers (within
/// the divisor-search budget).
fn integer_roots(poly: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut p: Vec<BigInt> = poly.to_vec();
    let mut roots = Vec::new();
    'outer: while p.len() > 1 {
        if p[0].is_zero() {
            roots.push(BigInt::zero());
            p.remove(0);
            continue;
        }
        for cand in divisor_candidates(&p[0])? {
            if eval_int(&p, &cand).is_zero() {
                p = deflate(&p, &cand);
                roots.push(cand);
                continue 'outer;
            }
        }
        return None;
    }
    roots.sort();
    roots.dedup();
    Some(roots)
}

fn eval_int(poly: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division of a monic polynomial by (x - r); the caller guarantees
/// r is a root.
fn deflate(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let d = poly.len() - 1;
    let mut out = vec![BigInt::zero(); d];
    let mut carry = BigInt::zero();
    for i in (0..d).rev() {
        carry = &poly[i + 1] + r * &carry;
        out[i] = carry.clone();
    }
    debug_assert!((&poly[0] + r * &out[0]).is_zero());
    out
}

/// Signed divisors of `n` found by trial division, smallest magnitude first;
/// `None` when `n` has a cofactor too large to factor within budget.
fn divisor_candidates(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= limit {
        let mut mult = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            mult += 1;
        }
        if mult > 0 {
            primes.push((d.clone(), mult));
        }
        d += 1;
    }
    if m > BigInt::from(1) {
        if &d * &d <= m {
            // unfactored composite cofactor: divisor set would be incomplete
            return None;
        }
        primes.push((m, 1));
    }
    let mut divisors = vec![BigInt::from(1)];
    for (p, mult) in primes {
        let mut next = Vec::new();
        for dvr in &divisors {
            let mut power = BigInt::from(1);
            for _ in 0..=mult {
                next.push(dvr * &power);
                power *= &p;
                if next.len() > 4096 {
                    return None;
                }
            }
        }
        divisors = next;
    }
    divisors.sort();
    divisors.dedup();
    let mut signed = Vec::with_capacity(divisors.len() * 2);
    for dvr in divisors {
        signed.push(dvr.clone());
        signed.push(-dvr);
    }
    Some(signed)
}
