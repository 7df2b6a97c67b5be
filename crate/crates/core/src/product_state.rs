//! Direct evaluation of the c-free product state `φ = (μ_1, ν_1) ∗ (μ_2, ν_2)`
//! and the free product state `ψ = ν_1 ∗ ν_2` on noncommutative words in
//! two variables.
//!
//! Nothing here touches cumulants. The only rule used is the defining
//! factorization: on an alternating product of factors that are centered
//! with respect to the `ψ_i`, the state is the product of the `φ_i`-values.
//! Everything else is reduced to that case by linearity.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::cumulants::{check_orders, MeasurePair, MomentSequence};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest `n` accepted by [`sum_moments_via_words`] (it sums `2^n` words).
pub const MAX_WORD_SUM: usize = 10;

/// A word `X_{i_1}^{k_1} ⋯ X_{i_m}^{k_m}` with adjacent indices distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    factors: Vec<(u8, u32)>,
}

impl Word {
    /// Builds a word from `(index, exponent)` factors, merging neighbours
    /// with equal index and dropping zero exponents. Indices must be 1 or 2.
    pub fn new<I: IntoIterator<Item = (u8, u32)>>(factors: I) -> Result<Self> {
        let mut out: Vec<(u8, u32)> = Vec::new();
        for (i, k) in factors {
            if i != 1 && i != 2 {
                return Err(Error::InvalidParameter(format!("variable index {i} is not 1 or 2")));
            }
            if k == 0 {
                continue;
            }
            match out.last_mut() {
                Some((j, e)) if *j == i => *e += k,
                _ => out.push((i, k)),
            }
        }
        Ok(Word { factors: out })
    }

    /// The word spelled by a sequence of single letters.
    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        Self::new(letters.iter().map(|&i| (i, 1)))
    }

    pub fn factors(&self) -> &[(u8, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|&(_, k)| k as usize).sum()
    }
}

/// The two measure pairs defining `(φ, ψ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFamily {
    pair1: MeasurePair,
    pair2: MeasurePair,
}

impl StateFamily {
    pub fn new(pair1: MeasurePair, pair2: MeasurePair) -> Result<Self> {
        check_orders(pair1.order(), pair2.order())?;
        Ok(StateFamily { pair1, pair2 })
    }

    pub fn order(&self) -> usize {
        self.pair1.order()
    }

    fn pair(&self, index: u8) -> &MeasurePair {
        if index == 1 {
            &self.pair1
        } else {
            &self.pair2
        }
    }
}

/// A polynomial in one of the two variables, as a general algebra element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    index: u8,
    /// `coeffs[k]` multiplies `X_index^k`; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl Letter {
    pub fn new(index: u8, mut coeffs: Vec<Rational>) -> Result<Self> {
        if index != 1 && index != 2 {
            return Err(Error::InvalidParameter(format!("variable index {index} is not 1 or 2")));
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Ok(Letter { index, coeffs })
    }

    pub fn power(index: u8, k: u32) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); k as usize + 1];
        coeffs[k as usize] = Rational::one();
        Self::new(index, coeffs)
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn times(&self, other: &Letter) -> Letter {
        debug_assert_eq!(self.index, other.index);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Letter { index: self.index, coeffs: Vec::new() };
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Letter::new(self.index, coeffs).expect("index already valid")
    }

    fn minus_constant(&self, c: &Rational) -> Letter {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        coeffs[0] -= c;
        Letter::new(self.index, coeffs).expect("index already valid")
    }

    /// Value of a one-variable state given by its moments.
    fn apply(&self, m: &MomentSequence) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| c * m.get(k))
            .sum()
    }

    /// `X_i^k - ν_i(X_i^k)`, an element of the kernel of `ψ_i`.
    pub fn centered_power(index: u8, k: u32, fam: &StateFamily) -> Result<Self> {
        let p = Self::power(index, k)?;
        if k as usize > fam.order() {
            return Err(Error::DegreeOverflow { degree: k as usize, order: fam.order() });
        }
        let c = p.apply(fam.pair(index).nu());
        Ok(p.minus_constant(&c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Target {
    Phi,
    Psi,
}

/// Recursive evaluator with a memo table that lives for one evaluation
/// session.
struct Evaluator<'a> {
    fam: &'a StateFamily,
    target: Target,
    memo: HashMap<Vec<Letter>, Rational>,
}

impl<'a> Evaluator<'a> {
    fn new(fam: &'a StateFamily, target: Target) -> Self {
        Evaluator { fam, target, memo: HashMap::new() }
    }

    fn psi_i(&self, l: &Letter) -> Rational {
        l.apply(self.fam.pair(l.index).nu())
    }

    fn phi_i(&self, l: &Letter) -> Rational {
        match self.target {
            Target::Phi => l.apply(self.fam.pair(l.index).mu()),
            Target::Psi => self.psi_i(l),
        }
    }

    /// Merges equal-index neighbours and pulls scalar letters out.
    fn normalize(letters: Vec<Letter>) -> (Rational, Vec<Letter>) {
        let mut scalar = Rational::one();
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if let Some(c) = l.constant() {
                if c.is_zero() {
                    return (Rational::zero(), Vec::new());
                }
                scalar *= c;
                continue;
            }
            match out.last_mut() {
                Some(prev) if prev.index == l.index => {
                    let merged = prev.times(&l);
                    out.pop();
                    if let Some(c) = merged.constant() {
                        if c.is_zero() {
                            return (Rational::zero(), Vec::new());
                        }
                        scalar *= c;
                        // Removing a letter may expose two equal neighbours.
                        let (s, rest) = Self::normalize(out);
                        return (scalar * s, rest);
                    }
                    out.push(merged);
                }
                _ => out.push(l),
            }
        }
        (scalar, out)
    }

    fn eval(&mut self, letters: Vec<Letter>) -> Rational {
        let (scalar, word) = Self::normalize(letters);
        if scalar.is_zero() {
            return scalar;
        }
        scalar * self.eval_normalized(word)
    }

    fn eval_normalized(&mut self, word: Vec<Letter>) -> Rational {
        if word.is_empty() {
            return Rational::one();
        }
        if let Some(v) = self.memo.get(&word) {
            return v.clone();
        }
        let value = match word.iter().position(|l| !self.psi_i(l).is_zero()) {
            // Alternating and centered: the defining factorization applies.
            None => word.iter().map(|l| self.phi_i(l)).product(),
            Some(j) => {
                let s = self.psi_i(&word[j]);
                let mut removed = word.clone();
                removed.remove(j);
                let mut centered = word.clone();
                centered[j] = word[j].minus_constant(&s);
                &s * self.eval(removed) + self.eval(centered)
            }
        };
        self.memo.insert(word, value.clone());
        value
    }
}

fn check_degree(letters: &[Letter], fam: &StateFamily) -> Result<()> {
    // Merging never raises the total degree above this sum.
    let degree: usize = letters.iter().map(Letter::degree).sum();
    if degree > fam.order() {
        return Err(Error::DegreeOverflow { degree, order: fam.order() });
    }
    Ok(())
}

/// `φ` on a product of general one-variable elements.
pub fn eval_phi_letters(letters: &[Letter], fam: &StateFamily) -> Result<Rational> {
    check_degree(letters, fam)?;
    Ok(Evaluator::new(fam, Target::Phi).eval(letters.to_vec()))
}

/// `ψ` on a product of general one-variable elements.
pub fn eval_psi_letters(letters: &[Letter], fam: &StateFamily) -> Result<Rational> {
    check_degree(letters, fam)?;
    Ok(Evaluator::new(fam, Target::Psi).eval(letters.to_vec()))
}

fn word_letters(word: &Word) -> Vec<Letter> {
    word.factors
        .iter()
        .map(|&(i, k)| Letter::power(i, k).expect("validated word"))
        .collect()
}

/// The c-free product state on a word.
pub fn eval_phi(word: &Word, fam: &StateFamily) -> Result<Rational> {
    eval_phi_letters(&word_letters(word), fam)
}

/// The free product state of the `ν_i` on a word.
pub fn eval_psi(word: &Word, fam: &StateFamily) -> Result<Rational> {
    eval_psi_letters(&word_letters(word), fam)
}

/// `φ((X_1 + X_2)^n)`, expanded over all `2^n` words.
pub fn sum_moments_via_words(p1: &MeasurePair, p2: &MeasurePair, n: usize) -> Result<Rational> {
    if n == 0 || n > MAX_WORD_SUM {
        return Err(Error::Bound { value: n, min: 1, max: MAX_WORD_SUM });
    }
    let fam = StateFamily::new(p1.clone(), p2.clone())?;
    if n > fam.order() {
        return Err(Error::DegreeOverflow { degree: n, order: fam.order() });
    }
    let mut evaluator = Evaluator::new(&fam, Target::Phi);
    let mut total = Rational::zero();
    for mask in 0u32..(1 << n) {
        let letters: Vec<u8> = (0..n).map(|b| if mask >> b & 1 == 0 { 1 } else { 2 }).collect();
        let word = Word::from_letters(&letters)?;
        total += evaluator.eval(word_letters(&word));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ms(v: &[Rational]) -> MomentSequence {
        MomentSequence::new(v.to_vec()).unwrap()
    }

    fn random_moments(rng: &mut ChaCha8Rng, order: usize) -> MomentSequence {
        let mut m = vec![int(1)];
        for _ in 0..order {
            m.push(ratio(rng.gen_range(-6..=6), rng.gen_range(1..=5)));
        }
        ms(&m)
    }

    fn random_family(rng: &mut ChaCha8Rng, order: usize) -> StateFamily {
        let mut pair = || MeasurePair::new(random_moments(rng, order), random_moments(rng, order)).unwrap();
        let (a, b) = (pair(), pair());
        StateFamily::new(a, b).unwrap()
    }

    fn family() -> StateFamily {
        StateFamily::new(
            MeasurePair::new(
                ms(&[int(1), int(0), ratio(3, 2), ratio(1, 4), int(5)]),
                ms(&[int(1), int(0), ratio(1, 2), ratio(-1, 3), int(2)]),
            )
            .unwrap(),
            MeasurePair::new(
                ms(&[int(1), ratio(2, 3), ratio(1, 5), int(1), ratio(7, 2)]),
                ms(&[int(1), ratio(-1, 4), int(3), ratio(2, 9), int(1)]),
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_variable_words() {
        let fam = family();
        assert_eq!(eval_phi(&Word::default(), &fam).unwrap(), int(1));
        assert_eq!(eval_psi(&Word::default(), &fam).unwrap(), int(1));
        for k in 1..=4u32 {
            let w = Word::new([(1, k)]).unwrap();
            assert_eq!(&eval_phi(&w, &fam).unwrap(), fam.pair1.mu().get(k as usize));
            assert_eq!(&eval_psi(&w, &fam).unwrap(), fam.pair1.nu().get(k as usize));
        }
    }

    #[test]
    fn two_letter_word_factorizes() {
        let fam = family();
        let w = Word::from_letters(&[1, 2]).unwrap();
        let expected = fam.pair1.mu().get(1) * fam.pair2.mu().get(1);
        assert_eq!(eval_phi(&w, &fam).unwrap(), expected);
    }

    #[test]
    fn three_letter_word_matches_hand_reduction() {
        // m_1(μ_1) = m_1(ν_1) = 0 in `family()`. Split the middle factor as
        // X_2 = (X_2 - ν_2(X_2)) + ν_2(X_2): the centered part sits between
        // two copies of X_1, which are centered too, so it factorizes as
        // φ_1(X_1) φ_2(X_2 - ν_2(X_2)) φ_1(X_1) = 0; the scalar part leaves
        // ν_2(X_2) φ(X_1^2).
        let fam = family();
        let w = Word::from_letters(&[1, 2, 1]).unwrap();
        let expected = fam.pair2.nu().get(1) * fam.pair1.mu().get(2);
        assert_eq!(eval_phi(&w, &fam).unwrap(), expected);

        // The same value via the three-term reduction rule with y_1 = y_2 = 1.
        let a = Letter::power(2, 1).unwrap();
        let psi_a = fam.pair2.nu().get(1);
        let phi_a = fam.pair2.mu().get(1);
        let y1 = [Letter::power(1, 1).unwrap()];
        let phi_y = eval_phi_letters(&y1, &fam).unwrap();
        let phi_yy = eval_phi_letters(&[y1[0].clone(), y1[0].clone()], &fam).unwrap();
        let via_rule = psi_a * &phi_yy - psi_a * &phi_y * &phi_y + phi_a * &phi_y * &phi_y;
        let direct = eval_phi_letters(&[y1[0].clone(), a, y1[0].clone()], &fam).unwrap();
        assert_eq!(direct, via_rule);
        assert_eq!(direct, expected);
    }

    #[test]
    fn psi_of_alternating_word() {
        let fam = family();
        let w = Word::from_letters(&[1, 2, 1]).unwrap();
        // m_1(ν_1) = 0: ψ(X_1 X_2 X_1) = m_1(ν_2) m_2(ν_1).
        let expected = fam.pair2.nu().get(1) * fam.pair1.nu().get(2);
        assert_eq!(eval_psi(&w, &fam).unwrap(), expected);
    }

    #[test]
    fn word_sums_low_orders() {
        let fam = family();
        let (p1, p2) = (&fam.pair1, &fam.pair2);
        assert_eq!(sum_moments_via_words(p1, p2, 1).unwrap(), p1.mu().get(1) + p2.mu().get(1));
        let expected = p1.mu().get(2) + p2.mu().get(2) + int(2) * p1.mu().get(1) * p2.mu().get(1);
        assert_eq!(sum_moments_via_words(p1, p2, 2).unwrap(), expected);
    }

    #[test]
    fn bounds_and_errors() {
        let fam = family();
        let (p1, p2) = (&fam.pair1, &fam.pair2);
        assert!(matches!(sum_moments_via_words(p1, p2, 5), Err(Error::DegreeOverflow { .. })));
        assert!(matches!(sum_moments_via_words(p1, p2, 0), Err(Error::Bound { .. })));
        assert!(matches!(sum_moments_via_words(p1, p2, 11), Err(Error::Bound { .. })));
        let w = Word::new([(1, 3), (2, 2)]).unwrap();
        assert!(matches!(eval_phi(&w, &fam), Err(Error::DegreeOverflow { degree: 5, order: 4 })));
        assert!(Word::new([(3, 1)]).is_err());
        assert_eq!(Word::new([(1, 1), (1, 2), (2, 0), (1, 1)]).unwrap().factors(), &[(1, 4)]);
    }

    fn random_elementary(rng: &mut ChaCha8Rng, fam: &StateFamily, first: u8, max_len: usize) -> Vec<Letter> {
        let len = rng.gen_range(1..=max_len);
        let mut index = first;
        (0..len)
            .map(|_| {
                let k = rng.gen_range(1..=2);
                let l = Letter::centered_power(index, k, fam).unwrap();
                index = 3 - index;
                l
            })
            .collect()
    }

    fn adjoint(y: &[Letter]) -> Vec<Letter> {
        y.iter().rev().cloned().collect()
    }

    fn degree(y: &[Letter]) -> usize {
        y.iter().map(Letter::degree).sum()
    }

    #[test]
    fn elementary_elements_from_different_algebras_factorize() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 40 {
            let fam = random_family(&mut rng, 6);
            let i1 = rng.gen_range(1..=2u8);
            let y1 = random_elementary(&mut rng, &fam, i1, 3);
            let y2 = random_elementary(&mut rng, &fam, 3 - i1, 3);
            if degree(&y1) + degree(&y2) > 6 {
                continue;
            }
            let mut joined = adjoint(&y1);
            joined.extend(y2.iter().cloned());
            let lhs = eval_phi_letters(&joined, &fam).unwrap();
            let rhs = eval_phi_letters(&adjoint(&y1), &fam).unwrap() * eval_phi_letters(&y2, &fam).unwrap();
            assert_eq!(lhs, rhs);
            checked += 1;
        }
    }

    #[test]
    fn three_term_reduction_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 40 {
            let fam = random_family(&mut rng, 6);
            let i = rng.gen_range(1..=2u8);
            let other = 3 - i;
            let y1 = random_elementary(&mut rng, &fam, other, 2);
            let y2 = random_elementary(&mut rng, &fam, other, 2);
            let a_deg = rng.gen_range(1..=2);
            let coeffs = (0..=a_deg).map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect();
            let a = Letter::new(i, coeffs).unwrap();
            if degree(&y1) + degree(&y2) + a.degree() > 6 {
                continue;
            }
            let y1s = adjoint(&y1);
            let phi = |w: &[Letter]| eval_phi_letters(w, &fam).unwrap();
            let mut lhs_word = y1s.clone();
            lhs_word.push(a.clone());
            lhs_word.extend(y2.iter().cloned());
            let mut y1s_y2 = y1s.clone();
            y1s_y2.extend(y2.iter().cloned());

            let psi_a = a.apply(fam.pair(i).nu());
            let phi_a = a.apply(fam.pair(i).mu());
            let (p1, p2) = (phi(&y1s), phi(&y2));
            let rhs = &psi_a * phi(&y1s_y2) - &psi_a * &p1 * &p2 + &phi_a * &p1 * &p2;
            assert_eq!(phi(&lhs_word), rhs);
            checked += 1;
        }
    }

    #[test]
    fn psi_is_phi_for_diagonal_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let fam = random_family(&mut rng, 6);
            let diag = StateFamily::new(
                MeasurePair::diagonal(fam.pair1.nu().clone()),
                MeasurePair::diagonal(fam.pair2.nu().clone()),
            )
            .unwrap();
            let letters: Vec<u8> = (0..6).map(|_| rng.gen_range(1..=2)).collect();
            let w = Word::from_letters(&letters).unwrap();
            assert_eq!(eval_psi(&w, &fam).unwrap(), eval_phi(&w, &diag).unwrap());
        }
    }

    #[test]
    fn word_sums_agree_with_cumulant_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..5 {
            let fam = random_family(&mut rng, 7);
            let conv = crate::convolution::cfree_convolve(&fam.pair1, &fam.pair2).unwrap();
            for n in 1..=7 {
                let direct = sum_moments_via_words(&fam.pair1, &fam.pair2, n).unwrap();
                assert_eq!(&direct, conv.mu().get(n), "n = {n}");
            }
        }
    }
}
