//! Encoding of (word, index-word) pairs as 3x3 natural matrices.
//!
//! A pair `(w, J)` with `w` over `0,1` and `J` over `0,1,2,3` maps to
//!
//! ```text
//! [ 2^|w|  beta(w)  0      ]
//! [ 0      1        0      ]
//! [ 0      phi(J)   4^|J|  ]
//! ```
//!
//! where both valuations read the *leftmost* symbol as the least-significant
//! digit: `beta(x_0 .. x_{n-1}) = sum x_t 2^t` and `phi(d_0 .. d_{n-1}) =
//! sum d_t 4^t`. That orientation is what makes the map a monoid
//! homomorphism: concatenating pairs coordinatewise corresponds to
//! multiplying their matrices, e.g. the `(3,2)` entry of `M(w,J) * M(w',J')`
//! is `phi(J) + 4^|J| * phi(J')  =  phi(J J')`. (With the opposite,
//! most-significant-first reading the product identities fail, so this
//! module standardizes on least-significant-first throughout.)
//!
//! For a correspondence instance over `0,1` with pairs `(u_i, v_i)`,
//! [`build_matrices`] produces the matrix family
//!
//! ```text
//! L       <-> (eps,  2)
//! U_i     <-> (u_i,  2 c_i)        Ubar_i  <-> (u_i, 2 c_i 3)
//! V_i     <-> (v_i,  c_i 2)        Vbar_i  <-> (v_i, c_i 3)
//! ```
//!
//! with `c_i` the `h`-bit index code of `i` and `h = max(ceil(log2 k), 1)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{Alphabet, PcpInstance, Word};

/// Arbitrary-precision natural number. Matrix entries grow like `4^|J|`, so
/// fixed-width integers overflow almost immediately.
pub type Nat = BigUint;

/// A 3x3 matrix of naturals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat3 {
    rows: [[Nat; 3]; 3],
}

impl Mat3 {
    pub fn new(rows: [[Nat; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    pub fn from_u64(rows: [[u64; 3]; 3]) -> Self {
        Mat3 {
            rows: rows.map(|r| r.map(Nat::from)),
        }
    }

    pub fn identity() -> Self {
        let mut rows: [[Nat; 3]; 3] = Default::default();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Nat::one();
        }
        Mat3 { rows }
    }

    pub fn rows(&self) -> &[[Nat; 3]; 3] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> &Nat {
        &self.rows[row][col]
    }
}

/// Matrix product `a * b`.
pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut rows: [[Nat; 3]; 3] = Default::default();
    for (row, a_row) in rows.iter_mut().zip(&a.rows) {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Nat::zero();
            for (k, b_row) in b.rows.iter().enumerate() {
                acc += &a_row[k] * &b_row[j];
            }
            *cell = acc;
        }
    }
    Mat3 { rows }
}

impl std::ops::Mul for &Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: &Mat3) -> Mat3 {
        mat_mul(self, rhs)
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{} {} {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

fn digit_value(w: &Word, base: u32, max_alphabet: usize) -> Result<Nat> {
    if w.alphabet().size() > max_alphabet {
        return Err(Error::DigitsOutOfRange {
            expected: max_alphabet,
        });
    }
    // Least-significant digit first: fold from the right with Horner's rule.
    let mut acc = Nat::zero();
    for &s in w.symbols().iter().rev() {
        acc = acc * base + s;
    }
    Ok(acc)
}

/// Base-2 value of a word over `0,1`, leftmost symbol least significant.
pub fn binary_value(w: &Word) -> Result<Nat> {
    digit_value(w, 2, 2)
}

/// Base-4 value of a word over `0,1,2,3` (a word over `0,1` is accepted,
/// its digits read the same way), leftmost symbol least significant.
pub fn quaternary_value(w: &Word) -> Result<Nat> {
    digit_value(w, 4, 4)
}

/// Index-code table for an instance with `k` pairs: pair `i` gets the
/// `h`-bit binary numeral of `i`, most significant bit first, with
/// `h = max(ceil(log2 k), 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingParams {
    k: usize,
    h: usize,
    codes: Vec<Word>,
}

impl EncodingParams {
    pub fn canonical(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyInstance);
        }
        let h = usize::max((k as u64).next_power_of_two().trailing_zeros() as usize, 1);
        let binary = Alphabet::binary();
        let codes = (0..k)
            .map(|i| {
                let symbols = (0..h).rev().map(|bit| ((i >> bit) & 1) as u32).collect();
                binary.word_from_indices(symbols)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EncodingParams { k, h, codes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Code length in bits.
    pub fn h(&self) -> usize {
        self.h
    }

    /// The code of pair `i`: a length-`h` word over `0,1`.
    pub fn index_code(&self, i: usize) -> Result<&Word> {
        self.codes.get(i).ok_or(Error::PairIndexOutOfRange {
            index: i,
            count: self.k,
        })
    }
}

/// A pair `(w, J)`: `w` over the two-symbol alphabet, `J` over the
/// four-symbol alphabet. Pairs concatenate coordinatewise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringPair {
    w: Word,
    j: Word,
}

impl StringPair {
    pub fn new(w: Word, j: Word) -> Result<Self> {
        if w.alphabet() != &Alphabet::binary() {
            return Err(Error::DigitsOutOfRange { expected: 2 });
        }
        if j.alphabet() != &Alphabet::quaternary() {
            return Err(Error::DigitsOutOfRange { expected: 4 });
        }
        Ok(StringPair { w, j })
    }

    pub fn parse(w: &str, j: &str) -> Result<Self> {
        StringPair::new(
            Alphabet::binary().parse_word(w)?,
            Alphabet::quaternary().parse_word(j)?,
        )
    }

    pub fn empty() -> Self {
        StringPair {
            w: Alphabet::binary().empty_word(),
            j: Alphabet::quaternary().empty_word(),
        }
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    pub fn j(&self) -> &Word {
        &self.j
    }

    pub fn concat(&self, other: &StringPair) -> StringPair {
        StringPair {
            w: self.w.concat(&other.w).expect("fixed alphabets"),
            j: self.j.concat(&other.j).expect("fixed alphabets"),
        }
    }
}

impl fmt::Display for StringPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.w, self.j)
    }
}

fn pow_of(base: u32, exp: usize) -> Nat {
    Nat::from(base).pow(exp as u32)
}

/// Encodes a pair as its 3x3 matrix.
pub fn pair_to_matrix(p: &StringPair) -> Mat3 {
    let beta = binary_value(p.w()).expect("w is binary");
    let phi = quaternary_value(p.j()).expect("j is quaternary");
    Mat3::new([
        [pow_of(2, p.w().len()), beta, Nat::zero()],
        [Nat::zero(), Nat::one(), Nat::zero()],
        [Nat::zero(), phi, pow_of(4, p.j().len())],
    ])
}

/// Reads the exact exponent `e` with `base^e == n`, if any.
fn log_exact(base: u32, n: &Nat) -> Option<usize> {
    let base = Nat::from(base);
    let mut acc = Nat::one();
    let mut e = 0usize;
    while &acc < n {
        acc *= &base;
        e += 1;
    }
    (&acc == n).then_some(e)
}

/// Little-endian digits of `value` in `base`, padded to exactly `len`
/// digits. `None` when the value does not fit.
fn digits_le(mut value: Nat, base: u32, len: usize) -> Option<Vec<u32>> {
    let base_nat = Nat::from(base);
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let d = (&value % &base_nat)
            .to_u32_digits()
            .first()
            .copied()
            .unwrap_or(0);
        digits.push(d);
        value /= &base_nat;
    }
    value.is_zero().then_some(digits)
}

/// Decodes a matrix back to its pair, or reports that the matrix is not in
/// the image of the encoding.
pub fn matrix_to_pair(m: &Mat3) -> Result<StringPair> {
    let r = m.rows();
    for (row, col) in [(0, 2), (1, 0), (1, 2), (2, 0)] {
        if !r[row][col].is_zero() {
            return Err(Error::NotInImage(format!(
                "entry ({},{}) must be zero",
                row + 1,
                col + 1
            )));
        }
    }
    if !r[1][1].is_one() {
        return Err(Error::NotInImage("entry (2,2) must be one".into()));
    }
    let w_len = log_exact(2, &r[0][0])
        .ok_or_else(|| Error::NotInImage("entry (1,1) must be a power of two".into()))?;
    let j_len = log_exact(4, &r[2][2])
        .ok_or_else(|| Error::NotInImage("entry (3,3) must be a power of four".into()))?;
    let w_digits = digits_le(r[0][1].clone(), 2, w_len)
        .ok_or_else(|| Error::NotInImage("entry (1,2) exceeds the word capacity".into()))?;
    let j_digits = digits_le(r[2][1].clone(), 4, j_len)
        .ok_or_else(|| Error::NotInImage("entry (3,2) exceeds the index-word capacity".into()))?;
    StringPair::new(
        Alphabet::binary().word_from_indices(w_digits)?,
        Alphabet::quaternary().word_from_indices(j_digits)?,
    )
}

// --- The generator family of an instance -------------------------------

/// Quaternary digits as symbol indices.
const D2: u32 = 2;
const D3: u32 = 3;

fn quat_word(symbols: Vec<u32>) -> Word {
    Alphabet::quaternary()
        .word_from_indices(symbols)
        .expect("digits below four")
}

/// `(eps, 2)`.
pub(crate) fn pair_eps2() -> StringPair {
    StringPair::new(Alphabet::binary().empty_word(), quat_word(vec![D2])).expect("fixed")
}

fn code_digits(params: &EncodingParams, i: usize) -> Result<Vec<u32>> {
    Ok(params.index_code(i)?.symbols().to_vec())
}

/// `(u_i, 2 c_i)`.
pub(crate) fn pair_u(inst: &PcpInstance, params: &EncodingParams, i: usize) -> Result<StringPair> {
    let (u, _) = inst.pair(i)?;
    let mut j = vec![D2];
    j.extend(code_digits(params, i)?);
    StringPair::new(u.clone(), quat_word(j))
}

/// `(u_i, 2 c_i 3)`.
pub(crate) fn pair_ubar(
    inst: &PcpInstance,
    params: &EncodingParams,
    i: usize,
) -> Result<StringPair> {
    let (u, _) = inst.pair(i)?;
    let mut j = vec![D2];
    j.extend(code_digits(params, i)?);
    j.push(D3);
    StringPair::new(u.clone(), quat_word(j))
}

/// `(v_i, c_i 2)`.
pub(crate) fn pair_v(inst: &PcpInstance, params: &EncodingParams, i: usize) -> Result<StringPair> {
    let (_, v) = inst.pair(i)?;
    let mut j = code_digits(params, i)?;
    j.push(D2);
    StringPair::new(v.clone(), quat_word(j))
}

/// `(v_i, c_i 3)`.
pub(crate) fn pair_vbar(
    inst: &PcpInstance,
    params: &EncodingParams,
    i: usize,
) -> Result<StringPair> {
    let (_, v) = inst.pair(i)?;
    let mut j = code_digits(params, i)?;
    j.push(D3);
    StringPair::new(v.clone(), quat_word(j))
}

/// The four matrices attached to one instance pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMatrices {
    pub u: Mat3,
    pub ubar: Mat3,
    pub v: Mat3,
    pub vbar: Mat3,
}

/// The matrix family of an instance: `L` plus four matrices per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMatrices {
    params: EncodingParams,
    l: Mat3,
    per_pair: Vec<PairMatrices>,
}

impl InstanceMatrices {
    pub fn params(&self) -> &EncodingParams {
        &self.params
    }

    pub fn l(&self) -> &Mat3 {
        &self.l
    }

    pub fn per_pair(&self) -> &[PairMatrices] {
        &self.per_pair
    }
}

pub(crate) fn require_binary(inst: &PcpInstance) -> Result<()> {
    if inst.alphabet() != &Alphabet::binary() {
        return Err(Error::NotBinaryInstance);
    }
    Ok(())
}

/// Builds the matrix family of a binary instance directly from the entry
/// templates (not via [`pair_to_matrix`], so the two construction routes can
/// be checked against each other).
pub fn build_matrices(inst: &PcpInstance) -> Result<InstanceMatrices> {
    require_binary(inst)?;
    let params = EncodingParams::canonical(inst.k())?;
    let h = params.h();
    let l = Mat3::new([
        [Nat::one(), Nat::zero(), Nat::zero()],
        [Nat::zero(), Nat::one(), Nat::zero()],
        [Nat::zero(), Nat::from(2u32), Nat::from(4u32)],
    ]);
    let four = Nat::from(4u32);
    let two = Nat::from(2u32);
    let three = Nat::from(3u32);
    let mut per_pair = Vec::with_capacity(inst.k());
    for i in 0..inst.k() {
        let (u, v) = inst.pair(i)?;
        let code_value = quaternary_value(params.index_code(i)?)?;
        let upper = |w: &Word| -> Result<[[Nat; 3]; 2]> {
            Ok([
                [pow_of(2, w.len()), binary_value(w)?, Nat::zero()],
                [Nat::zero(), Nat::one(), Nat::zero()],
            ])
        };
        let stack = |top: [[Nat; 3]; 2], bottom: [Nat; 3]| {
            let [r0, r1] = top;
            Mat3::new([r0, r1, bottom])
        };
        let u_rows = upper(u)?;
        let v_rows = upper(v)?;
        per_pair.push(PairMatrices {
            // (3,2) = 2 + phi(c_i) * 4, (3,3) = 4^(h+1)
            u: stack(
                u_rows.clone(),
                [Nat::zero(), &two + &code_value * &four, pow_of(4, h + 1)],
            ),
            // (3,2) = 2 + phi(c_i) * 4 + 3 * 4^(h+1), (3,3) = 4^(h+2)
            ubar: stack(
                u_rows,
                [
                    Nat::zero(),
                    &two + &code_value * &four + &three * pow_of(4, h + 1),
                    pow_of(4, h + 2),
                ],
            ),
            // (3,2) = phi(c_i) + 2 * 4^h, (3,3) = 4^(h+1)
            v: stack(
                v_rows.clone(),
                [
                    Nat::zero(),
                    &code_value + &two * pow_of(4, h),
                    pow_of(4, h + 1),
                ],
            ),
            // (3,2) = phi(c_i) + 3 * 4^h, (3,3) = 4^(h+1)
            vbar: stack(
                v_rows,
                [
                    Nat::zero(),
                    &code_value + &three * pow_of(4, h),
                    pow_of(4, h + 1),
                ],
            ),
        });
    }
    Ok(InstanceMatrices {
        params,
        l,
        per_pair,
    })
}

/// One randomized embedding failure, kept readable for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingFailure {
    /// Generator labels in product order, e.g. `["L", "U0", "V~1"]`.
    pub sequence: Vec<String>,
    pub detail: String,
}

/// Outcome of [`verify_embedding`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub trials: usize,
    pub failures: Vec<EmbeddingFailure>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Randomized check that matrix products and coordinatewise pair
/// concatenation agree: for `trials` seeded random generator sequences of
/// length `1..=max_len` over `{L, U_i, Ubar_i, V_i, Vbar_i}`, the matrix
/// product must decode to the concatenated pair, and the concatenated pair
/// must encode to the matrix product. The same seed always reproduces the
/// same sequences.
pub fn verify_embedding(
    inst: &PcpInstance,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> Result<EmbeddingReport> {
    if trials == 0 || max_len == 0 {
        return Err(Error::InvalidLimits);
    }
    let matrices = build_matrices(inst)?;
    let params = matrices.params();
    let mut generators: Vec<(String, Mat3, StringPair)> =
        vec![("L".into(), matrices.l().clone(), pair_eps2())];
    for i in 0..inst.k() {
        let pm = &matrices.per_pair()[i];
        generators.push((format!("U{i}"), pm.u.clone(), pair_u(inst, params, i)?));
        generators.push((
            format!("U~{i}"),
            pm.ubar.clone(),
            pair_ubar(inst, params, i)?,
        ));
        generators.push((format!("V{i}"), pm.v.clone(), pair_v(inst, params, i)?));
        generators.push((
            format!("V~{i}"),
            pm.vbar.clone(),
            pair_vbar(inst, params, i)?,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let len = rng.random_range(1..=max_len);
        let picks: Vec<usize> = (0..len)
            .map(|_| rng.random_range(0..generators.len()))
            .collect();
        let sequence: Vec<String> = picks.iter().map(|&g| generators[g].0.clone()).collect();
        let mut product = Mat3::identity();
        let mut concat = StringPair::empty();
        for &g in &picks {
            product = mat_mul(&product, &generators[g].1);
            concat = concat.concat(&generators[g].2);
        }
        match matrix_to_pair(&product) {
            Ok(decoded) if decoded == concat => {}
            Ok(decoded) => failures.push(EmbeddingFailure {
                sequence: sequence.clone(),
                detail: format!(
                    "matrix product decodes to {decoded}, pairs concatenate to {concat}"
                ),
            }),
            Err(err) => failures.push(EmbeddingFailure {
                sequence: sequence.clone(),
                detail: format!("matrix product does not decode: {err}"),
            }),
        }
        if pair_to_matrix(&concat) != product {
            failures.push(EmbeddingFailure {
                sequence,
                detail: "encoding the concatenated pair does not give the matrix product".into(),
            });
        }
    }
    Ok(EmbeddingReport { trials, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bw(text: &str) -> Word {
        Alphabet::binary().parse_word(text).unwrap()
    }

    fn qw(text: &str) -> Word {
        Alphabet::quaternary().parse_word(text).unwrap()
    }

    fn counterexample() -> PcpInstance {
        PcpInstance::parse(Alphabet::binary(), &[("00", "0")]).unwrap()
    }

    fn closure() -> PcpInstance {
        counterexample().symmetric_closure()
    }

    #[test]
    fn binary_value_examples() {
        assert_eq!(binary_value(&bw("")).unwrap(), Nat::zero());
        assert_eq!(binary_value(&bw("01")).unwrap(), Nat::from(2u32));
        assert_eq!(binary_value(&bw("011")).unwrap(), Nat::from(6u32));
    }

    #[test]
    fn quaternary_value_examples() {
        assert_eq!(quaternary_value(&qw("")).unwrap(), Nat::zero());
        assert_eq!(quaternary_value(&qw("2")).unwrap(), Nat::from(2u32));
        assert_eq!(quaternary_value(&qw("220")).unwrap(), Nat::from(10u32));
        assert_eq!(quaternary_value(&qw("20213")).unwrap(), Nat::from(866u32));
        // Binary words are valid base-4 input.
        assert_eq!(quaternary_value(&bw("11")).unwrap(), Nat::from(5u32));
    }

    #[test]
    fn valuations_reject_wide_alphabets() {
        let wide = Alphabet::new(["0", "1", "2", "3", "4"]).unwrap();
        let w = wide.parse_word("4").unwrap();
        assert!(binary_value(&w).is_err());
        assert!(quaternary_value(&w).is_err());
    }

    #[test]
    fn canonical_index_codes() {
        let p1 = EncodingParams::canonical(1).unwrap();
        assert_eq!(p1.h(), 1);
        assert_eq!(p1.index_code(0).unwrap(), &bw("0"));

        let p2 = EncodingParams::canonical(2).unwrap();
        assert_eq!(p2.h(), 1);
        assert_eq!(p2.index_code(1).unwrap(), &bw("1"));

        let p3 = EncodingParams::canonical(3).unwrap();
        assert_eq!(p3.h(), 2);
        assert_eq!(p3.index_code(2).unwrap(), &bw("10"));

        let p5 = EncodingParams::canonical(5).unwrap();
        assert_eq!(p5.h(), 3);
        assert_eq!(p5.index_code(4).unwrap(), &bw("100"));
    }

    #[test]
    fn matrices_of_the_single_pair_instance() {
        let m = build_matrices(&counterexample()).unwrap();
        assert_eq!(m.l(), &Mat3::from_u64([[1, 0, 0], [0, 1, 0], [0, 2, 4]]));
        let pm = &m.per_pair()[0];
        assert_eq!(pm.u, Mat3::from_u64([[4, 0, 0], [0, 1, 0], [0, 2, 16]]));
        assert_eq!(pm.v, Mat3::from_u64([[2, 0, 0], [0, 1, 0], [0, 8, 16]]));
        assert_eq!(pm.vbar, Mat3::from_u64([[2, 0, 0], [0, 1, 0], [0, 12, 16]]));
        assert_eq!(pm.ubar, Mat3::from_u64([[4, 0, 0], [0, 1, 0], [0, 50, 64]]));
    }

    #[test]
    fn templates_agree_with_pair_encoding() {
        for inst in [counterexample(), closure()] {
            let m = build_matrices(&inst).unwrap();
            let params = m.params();
            assert_eq!(&pair_to_matrix(&pair_eps2()), m.l());
            for i in 0..inst.k() {
                let pm = &m.per_pair()[i];
                assert_eq!(pair_to_matrix(&pair_u(&inst, params, i).unwrap()), pm.u);
                assert_eq!(
                    pair_to_matrix(&pair_ubar(&inst, params, i).unwrap()),
                    pm.ubar
                );
                assert_eq!(pair_to_matrix(&pair_v(&inst, params, i).unwrap()), pm.v);
                assert_eq!(
                    pair_to_matrix(&pair_vbar(&inst, params, i).unwrap()),
                    pm.vbar
                );
            }
        }
    }

    #[test]
    fn product_of_l_and_u0() {
        let m = build_matrices(&counterexample()).unwrap();
        let lu = mat_mul(m.l(), &m.per_pair()[0].u);
        assert_eq!(lu, Mat3::from_u64([[4, 0, 0], [0, 1, 0], [0, 10, 64]]));
        // Identity behaves as the empty pair.
        assert_eq!(mat_mul(&Mat3::identity(), m.l()), m.l().clone());
        assert_eq!(pair_to_matrix(&StringPair::empty()), Mat3::identity());
    }

    #[test]
    fn frozen_product_on_the_closure() {
        let m = build_matrices(&closure()).unwrap();
        let product = mat_mul(&m.per_pair()[0].u, &m.per_pair()[1].ubar);
        assert_eq!(
            product,
            Mat3::from_u64([[8, 0, 0], [0, 1, 0], [0, 866, 1024]])
        );
        let lvv = mat_mul(&mat_mul(m.l(), &m.per_pair()[0].v), &m.per_pair()[1].vbar);
        assert_eq!(lvv, product);
        assert_eq!(
            matrix_to_pair(&product).unwrap(),
            StringPair::parse("000", "20213").unwrap()
        );
    }

    #[test]
    fn decode_rejects_matrices_outside_the_image() {
        let not_pow = Mat3::from_u64([[3, 0, 0], [0, 1, 0], [0, 0, 4]]);
        assert!(matches!(
            matrix_to_pair(&not_pow),
            Err(Error::NotInImage(_))
        ));
        let too_big = Mat3::from_u64([[2, 5, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(
            matrix_to_pair(&too_big),
            Err(Error::NotInImage(_))
        ));
        let bad_zero = Mat3::from_u64([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(
            matrix_to_pair(&bad_zero),
            Err(Error::NotInImage(_))
        ));
        let bad_mid = Mat3::from_u64([[1, 0, 0], [0, 2, 0], [0, 0, 1]]);
        assert!(matches!(
            matrix_to_pair(&bad_mid),
            Err(Error::NotInImage(_))
        ));
    }

    #[test]
    fn decode_round_trip_examples() {
        assert_eq!(
            matrix_to_pair(&Mat3::from_u64([[1, 0, 0], [0, 1, 0], [0, 2, 4]])).unwrap(),
            StringPair::parse("", "2").unwrap()
        );
        // Leading (that is, most significant) zero digits survive because
        // the dimensions carry the lengths.
        let p = StringPair::parse("00", "20").unwrap();
        assert_eq!(matrix_to_pair(&pair_to_matrix(&p)).unwrap(), p);
    }

    #[test]
    fn embedding_report_on_the_counterexample() {
        let report = verify_embedding(&counterexample(), 200, 8, 7).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.trials, 200);
        // Same seed, same outcome.
        let again = verify_embedding(&counterexample(), 200, 8, 7).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn non_binary_instances_are_rejected() {
        let abc = Alphabet::new(["a", "b"]).unwrap();
        let u = abc.parse_word("ab").unwrap();
        let v = abc.parse_word("a").unwrap();
        let inst = PcpInstance::new(abc, vec![(u, v)]).unwrap();
        assert_eq!(build_matrices(&inst).unwrap_err(), Error::NotBinaryInstance);
    }

    proptest! {
        #[test]
        fn valuation_recurrences(a in "[01]{0,12}", b in "[01]{0,12}") {
            let wa = bw(&a);
            let wb = bw(&b);
            let cat = wa.concat(&wb).unwrap();
            // beta(x y) = beta(x) + 2^|x| beta(y)
            prop_assert_eq!(
                binary_value(&cat).unwrap(),
                binary_value(&wa).unwrap() + pow_of(2, wa.len()) * binary_value(&wb).unwrap()
            );
        }

        #[test]
        fn quaternary_recurrences(a in "[0-3]{0,12}", b in "[0-3]{0,12}") {
            let wa = qw(&a);
            let wb = qw(&b);
            let cat = wa.concat(&wb).unwrap();
            prop_assert_eq!(
                quaternary_value(&cat).unwrap(),
                quaternary_value(&wa).unwrap() + pow_of(4, wa.len()) * quaternary_value(&wb).unwrap()
            );
        }

        #[test]
        fn encoding_is_a_homomorphism(
            w1 in "[01]{0,6}", j1 in "[0-3]{0,6}",
            w2 in "[01]{0,6}", j2 in "[0-3]{0,6}",
        ) {
            let p1 = StringPair::parse(&w1, &j1).unwrap();
            let p2 = StringPair::parse(&w2, &j2).unwrap();
            prop_assert_eq!(
                pair_to_matrix(&p1.concat(&p2)),
                mat_mul(&pair_to_matrix(&p1), &pair_to_matrix(&p2))
            );
        }

        #[test]
        fn decode_inverts_encode(w in "[01]{0,10}", j in "[0-3]{0,10}") {
            let p = StringPair::parse(&w, &j).unwrap();
            prop_assert_eq!(matrix_to_pair(&pair_to_matrix(&p)).unwrap(), p);
        }
    }
}
