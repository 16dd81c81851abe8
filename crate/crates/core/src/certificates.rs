//! Explicit dual witnesses for parallel repetition, the monotone-set operator
//! inequality, and the classical reductions.
//!
//! Every construction starts from a single-round witness `(Y, Y_2, …, Y_r)`
//! and produces blocks on the `n`-fold game of the form
//! `Σ_{w ∈ S} weight(w) · f_j(w_1) ⊗ … ⊗ f_j(w_n)`, where `f_j(0)` is the
//! consistency operator of round `j` (`ρ` for the first round) or a clamped
//! remainder of it, and `f_j(1)` is the matching witness block.

use crate::error::{Error, Result};
use crate::game::{copies, tensor_word, words, OutcomeOperators};
use crate::operator::HermitianOperator;
use crate::scalar::{self, Real};
use crate::sdp::{check_dual_feasibility, DualWitness, WitnessMeta};

/// Tolerance for accepting an input witness as feasible.
const INPUT_TOL: f64 = 1e-9;
const DIAGONAL_TOL: f64 = 1e-12;
const COMMUTE_TOL: f64 = 1e-10;
const LEMMA_PSD_TOL: f64 = 1e-10;

fn require_feasible<T: Real>(
    g: &OutcomeOperators<T>,
    objective: &HermitianOperator<T>,
    w: &DualWitness<T>,
) -> Result<()> {
    let report = check_dual_feasibility(g, objective, w, INPUT_TOL)?;
    if !report.feasible {
        let (name, worst) = report
            .constraints
            .iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .cloned()
            .unwrap_or_default();
        return Err(Error::InfeasibleWitness(format!(
            "constraint `{name}` has min eigenvalue {worst:.3e}"
        )));
    }
    Ok(())
}

/// Witness blocks `Σ_{w ∈ set} weight · ⊗_c letters[j][w_c]` for every round.
fn word_sum<T: Real>(
    letters: &[[HermitianOperator<T>; 2]],
    n: usize,
    set: &[Vec<usize>],
    weight: T,
) -> Result<Vec<HermitianOperator<T>>> {
    letters
        .iter()
        .map(|pair| {
            let per_copy = copies(pair, n)?;
            let space = {
                let f: Vec<&HermitianOperator<T>> = per_copy.iter().map(|v| &v[0]).collect();
                tensor_word(&f)?.spaces().clone()
            };
            let mut acc = HermitianOperator::zeros(space);
            for w in set {
                let f: Vec<&HermitianOperator<T>> = w.iter().enumerate().map(|(c, &i)| &per_copy[c][i]).collect();
                acc = acc.add(&tensor_word(&f)?)?;
            }
            Ok(acc.scale(weight))
        })
        .collect()
}

/// `[R_j, Y_j]` for every round, with `R_1 = ρ`.
fn consistency_letters<T: Real>(g: &OutcomeOperators<T>, w: &DualWitness<T>) -> Result<Vec<[HermitianOperator<T>; 2]>> {
    if w.r() != g.r() {
        return Err(Error::DimensionMismatch(format!(
            "witness has {} blocks, the game has {} rounds",
            w.r(),
            g.r()
        )));
    }
    (1..=g.r())
        .map(|j| Ok([g.consistency(j).clone(), w.block(j).align_to(&g.dual_space(j))?]))
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("number of repetitions must be positive".into()))
    } else {
        Ok(())
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    check_n(n)?;
    if k > n {
        Err(Error::Domain(format!("threshold k={k} exceeds n={n}")))
    } else {
        Ok(())
    }
}

fn binary_words_with(n: usize, pred: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    words(2, n)
        .into_iter()
        .filter(|w| pred(w.iter().sum()))
        .collect()
}

fn finish<T: Real>(blocks: Vec<HermitianOperator<T>>, meta: WitnessMeta) -> DualWitness<T> {
    let mut it = blocks.into_iter();
    let y = it.next().expect("at least one round");
    DualWitness::new(y, it.collect(), meta).expect("blocks come from a valid game")
}

/// Average-value witness: `(1/n) Σ_c R⊗…⊗Y (at copy c)⊗…⊗R` in every
/// round. Its value is `Tr(Y)`.
pub fn witness_average<T: Real>(
    w: &DualWitness<T>,
    g: &OutcomeOperators<T>,
    values: &[T],
    n: usize,
) -> Result<DualWitness<T>> {
    check_n(n)?;
    require_feasible(g, &g.weighted_sum(values)?, w)?;
    if n == 1 {
        return Ok(w.clone());
    }
    let letters = consistency_letters(g, w)?;
    let set = binary_words_with(n, |ones| ones == 1);
    let blocks = word_sum(&letters, n, &set, T::one() / T::lit(n as f64))?;
    let mut meta = WitnessMeta::new("average", n);
    meta.values = Some(values.iter().map(|v| v.as_f64()).collect());
    Ok(finish(blocks, meta))
}

/// `Y^⊗n, {Y_j^⊗n}`: a witness for winning all `n` repetitions, value `Tr(Y)ⁿ`.
pub fn witness_tensor_power<T: Real>(w: &DualWitness<T>, g: &OutcomeOperators<T>, n: usize) -> Result<DualWitness<T>> {
    check_n(n)?;
    require_feasible(g, &win_operator(g)?, w)?;
    if n == 1 {
        return Ok(w.clone());
    }
    let letters = consistency_letters(g, w)?;
    let blocks = word_sum(&letters, n, &[vec![1; n]], T::one())?;
    Ok(finish(blocks, WitnessMeta::new("tensor-power", n).with_k(n)))
}

/// `f(0) = R`, `f(1) = Y` summed over all words with at least `k` ones;
/// value `Σ_{t≥k} C(n,t) Tr(Y)ᵗ`.
pub fn witness_naive<T: Real>(w: &DualWitness<T>, g: &OutcomeOperators<T>, n: usize, k: usize) -> Result<DualWitness<T>> {
    check_nk(n, k)?;
    require_feasible(g, &win_operator(g)?, w)?;
    let letters = consistency_letters(g, w)?;
    let blocks = word_sum(&letters, n, &binary_words_with(n, |ones| ones >= k), T::one())?;
    Ok(finish(blocks, WitnessMeta::new("naive", n).with_k(k)))
}

/// Word set of the recursive construction: `S(n,0) = {0ⁿ}`, `S(n,n) = {1ⁿ}`,
/// and otherwise `0·S(n−1,k) ∪ 1·Σ^{n−1}_{k−1}` (words with exactly `k−1`
/// ones).
pub fn snk_words(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![0; n]];
    }
    if k == n {
        return vec![vec![1; n]];
    }
    let mut out: Vec<Vec<usize>> = snk_words(n - 1, k)
        .into_iter()
        .map(|w| std::iter::once(0).chain(w).collect())
        .collect();
    out.extend(
        binary_words_with(n - 1, |ones| ones == k - 1)
            .into_iter()
            .map(|w| std::iter::once(1).chain(w).collect()),
    );
    out
}

/// Recursive witness for at least `k` wins out of `n`, value `Tr(Y)ᵏ C(n,k)`.
pub fn witness_recursive_snk<T: Real>(
    w: &DualWitness<T>,
    g: &OutcomeOperators<T>,
    n: usize,
    k: usize,
) -> Result<DualWitness<T>> {
    check_nk(n, k)?;
    require_feasible(g, &win_operator(g)?, w)?;
    if n == 1 && k == 1 {
        return Ok(w.clone());
    }
    let letters = consistency_letters(g, w)?;
    let blocks = word_sum(&letters, n, &snk_words(n, k), T::one())?;
    Ok(finish(blocks, WitnessMeta::new("snk", n).with_k(k)))
}

/// Lowers each witness block towards its consistency operator:
/// `Y'_j = min(Y_j, R_j)`. Diagonal pairs are clamped entrywise; commuting
/// pairs are clamped eigenvalue-wise in a shared eigenbasis; anything else is
/// refused.
pub fn clamp_to_consistency<T: Real>(g: &OutcomeOperators<T>, w: &DualWitness<T>) -> Result<DualWitness<T>> {
    let letters = consistency_letters(g, w)?;
    let dtol = T::tol(DIAGONAL_TOL);
    let blocks = letters
        .iter()
        .enumerate()
        .map(|(j, [r, y])| {
            if r.is_diagonal(dtol) && y.is_diagonal(dtol) {
                let d: Vec<T> = y.diagonal().iter().zip(r.diagonal()).map(|(a, b)| scalar::min(*a, b)).collect();
                HermitianOperator::from_diagonal(y.spaces().clone(), &d)
            } else {
                clamp_commuting(r, y, j + 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = w.meta.clone();
    meta.construction = format!("{}+clamped", meta.construction);
    Ok(finish(blocks, meta))
}

fn clamp_commuting<T: Real>(r: &HermitianOperator<T>, y: &HermitianOperator<T>, j: usize) -> Result<HermitianOperator<T>> {
    let tol = T::tol(COMMUTE_TOL);
    let (rm, ym) = (r.matrix(), y.matrix());
    let comm = scalar::max_abs(&(rm * ym - ym * rm));
    if comm > tol {
        return Err(Error::NonCommuting(format!(
            "witness block {j} and its consistency operator (commutator {:.3e})",
            comm.as_f64()
        )));
    }
    // a generic combination separates the joint eigenspaces
    let mix = r.add(&y.scale(T::lit(0.618_033_988_749_894_9)))?;
    let (_, v) = mix.eigen()?;
    let ry = v.adjoint() * rm * &v;
    let yy = v.adjoint() * ym * &v;
    let off = |m: &crate::scalar::CMatrix<T>| {
        let mut d = m.clone();
        for i in 0..d.nrows() {
            d[(i, i)] = scalar::re(T::zero());
        }
        scalar::max_abs(&d)
    };
    if off(&ry) > tol || off(&yy) > tol {
        return Err(Error::NonCommuting(format!(
            "no shared eigenbasis found for witness block {j}"
        )));
    }
    let dim = y.dim();
    let mut diag = crate::scalar::CMatrix::<T>::zeros(dim, dim);
    for i in 0..dim {
        diag[(i, i)] = scalar::re(scalar::min(yy[(i, i)].re, ry[(i, i)].re));
    }
    Ok(HermitianOperator::from_parts(y.spaces().clone(), &v * diag * v.adjoint()))
}

/// Classical threshold witness on a diagonal game: dephase `w`, clamp it below
/// the consistency operators, then sum `f(0) = R − Y'`, `f(1) = Y'` over all
/// words with at least `k` ones. Value `Σ_{t≥k} C(n,t) p̃ᵗ (1−p̃)ⁿ⁻ᵗ` with
/// `p̃ = Tr(Y')`.
pub fn witness_classical_binomial<T: Real>(
    w: &DualWitness<T>,
    g: &OutcomeOperators<T>,
    n: usize,
    k: usize,
) -> Result<DualWitness<T>> {
    check_nk(n, k)?;
    if !g.is_diagonal(T::tol(DIAGONAL_TOL)) {
        return Err(Error::NonDiagonal("the classical binomial witness needs a diagonal game".into()));
    }
    require_feasible(g, &win_operator(g)?, w)?;
    let dephased = finish(w.blocks().iter().map(|b| b.dephase()).collect(), w.meta.clone());
    let clamped = clamp_to_consistency(g, &dephased)?;
    let mut out = binomial_witness_unchecked(g, &clamped, n, k)?;
    out.meta = WitnessMeta::new("classical-binomial", n).with_k(k);
    Ok(out)
}

/// The binomial sum `f(0) = R − Y`, `f(1) = Y` over words with at least `k`
/// ones, built from `w` as given: no diagonality, feasibility or clamping
/// checks. On quantum games the result is generally infeasible.
pub fn binomial_witness_unchecked<T: Real>(
    g: &OutcomeOperators<T>,
    w: &DualWitness<T>,
    n: usize,
    k: usize,
) -> Result<DualWitness<T>> {
    check_nk(n, k)?;
    let letters = consistency_letters(g, w)?
        .into_iter()
        .map(|[r, y]| Ok([r.sub(&y)?, y]))
        .collect::<Result<Vec<_>>>()?;
    let blocks = word_sum(&letters, n, &binary_words_with(n, |ones| ones >= k), T::one())?;
    Ok(finish(blocks, WitnessMeta::new("binomial-unchecked", n).with_k(k)))
}

fn win_operator<T: Real>(g: &OutcomeOperators<T>) -> Result<HermitianOperator<T>> {
    if g.num_outcomes() != 2 {
        return Err(Error::OutcomeCount {
            expected: 2,
            found: g.num_outcomes(),
        });
    }
    Ok(g.outcomes()[1].clone())
}

/// An up-closed set of binary words of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneSet {
    n: usize,
    words: Vec<Vec<usize>>,
}

impl MonotoneSet {
    pub fn new(n: usize, mut words: Vec<Vec<usize>>) -> Result<Self> {
        words.sort();
        words.dedup();
        for w in &words {
            if w.len() != n || w.iter().any(|&b| b > 1) {
                return Err(Error::Domain(format!("{w:?} is not a binary word of length {n}")));
            }
            for i in 0..n {
                if w[i] == 0 {
                    let mut up = w.clone();
                    up[i] = 1;
                    if words.binary_search(&up).is_err() {
                        return Err(Error::Domain(format!("set contains {w:?} but not {up:?}")));
                    }
                }
            }
        }
        Ok(Self { n, words })
    }

    /// Words with at least `k` ones.
    pub fn threshold(n: usize, k: usize) -> Self {
        Self {
            n,
            words: binary_words_with(n, |ones| ones >= k),
        }
    }

    /// Up-closure of `generators`.
    pub fn generated_by(n: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let all = words(2, n);
        let words = all
            .into_iter()
            .filter(|w| generators.iter().any(|g| g.len() == n && g.iter().zip(w).all(|(a, b)| a <= b)))
            .collect();
        Self::new(n, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }
}

/// Outcome of the monotone-set inequality check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneCheck<T: Real> {
    pub holds: bool,
    /// Minimum eigenvalue of `Σ B-words − Σ A-words`.
    pub min_eigenvalue: T,
}

/// With `B_0 = A_0 − R` and `B_1 = A_1 + R`, checks
/// `Σ_{w ∈ Σⁿ_{≥k}} B_{w_1}⊗…⊗B_{w_n} ⪰ Σ_{w ∈ Σⁿ_{≥k}} A_{w_1}⊗…⊗A_{w_n}`.
pub fn verify_monotone_inequality<T: Real>(
    a0: &HermitianOperator<T>,
    a1: &HermitianOperator<T>,
    r: &HermitianOperator<T>,
    n: usize,
    k: usize,
) -> Result<MonotoneCheck<T>> {
    check_nk(n, k)?;
    verify_monotone_inequality_on(a0, a1, r, &MonotoneSet::threshold(n, k))
}

/// As [`verify_monotone_inequality`] over an arbitrary monotone set.
pub fn verify_monotone_inequality_on<T: Real>(
    a0: &HermitianOperator<T>,
    a1: &HermitianOperator<T>,
    r: &HermitianOperator<T>,
    set: &MonotoneSet,
) -> Result<MonotoneCheck<T>> {
    let a1 = a1.align_to(a0.spaces())?;
    let r = r.align_to(a0.spaces())?;
    let b0 = a0.sub(&r)?;
    let b1 = a1.add(&r)?;
    let tol = T::tol(LEMMA_PSD_TOL);
    for (name, op) in [("A0", a0), ("A1", &a1), ("R", &r), ("A1+R", &b1), ("A0-R", &b0)] {
        let m = op.min_eigenvalue()?;
        if m < -tol {
            return Err(Error::NotPsd {
                what: name.into(),
                min_eigenvalue: m.as_f64(),
            });
        }
    }
    let n = set.n();
    let left = word_sum(&[[b0, b1]], n, set.words(), T::one())?;
    let right = word_sum(&[[a0.clone(), a1]], n, set.words(), T::one())?;
    let min = if set.words().is_empty() {
        T::zero()
    } else {
        left[0].sub(&right[0])?.min_eigenvalue()?
    };
    Ok(MonotoneCheck {
        holds: min >= -T::tol(1e-9),
        min_eigenvalue: min,
    })
}

/// Best classical winning probability of a diagonal two-outcome single-round
/// game, by enumerating every deterministic answer function.
pub fn classical_optimum<T: Real>(g: &OutcomeOperators<T>) -> Result<T> {
    if g.r() != 1 {
        return Err(Error::Domain("classical enumeration covers single-round games only".into()));
    }
    if !g.is_diagonal(T::tol(DIAGONAL_TOL)) {
        return Err(Error::NonDiagonal("classical enumeration needs a diagonal game".into()));
    }
    let win = win_operator(g)?;
    let answers = g.answer_labels(1);
    let questions = g.question_labels(1);
    let order: Vec<&str> = answers.iter().chain(questions.iter()).copied().collect();
    let p1 = win.permute(&order)?;
    let dy: usize = answers.iter().map(|l| g.spaces().dim_of(l).unwrap()).product();
    let dx: usize = questions.iter().map(|l| g.spaces().dim_of(l).unwrap()).product();
    let count = (dy as u128).checked_pow(dx as u32).unwrap_or(u128::MAX);
    if count > 1 << 24 {
        return Err(Error::Domain(format!("{count} deterministic strategies are too many to enumerate")));
    }
    let diag = p1.diagonal();
    let mut best = T::zero();
    for f in words(dy, dx) {
        // f[x] is the answer to question x
        let v = f
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (x, &y)| acc + diag[y * dx + x]);
        best = scalar::max(best, v);
    }
    Ok(best)
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Value of the recursive witness: `pᵏ C(n,k)`.
pub fn snk_value(p: f64, n: usize, k: usize) -> f64 {
    p.powi(k as i32) * binomial(n, k)
}

/// Value of the naive witness: `Σ_{t≥k} C(n,t) pᵗ`.
pub fn naive_value(p: f64, n: usize, k: usize) -> f64 {
    (k..=n).map(|t| binomial(n, t) * p.powi(t as i32)).sum()
}

/// Binomial tail `Σ_{t≥k} C(n,t) pᵗ (1−p)ⁿ⁻ᵗ`.
pub fn binomial_tail(p: f64, n: usize, k: usize) -> f64 {
    (k..=n)
        .map(|t| binomial(n, t) * p.powi(t as i32) * (1.0 - p).powi((n - t) as i32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceList;

    #[test]
    fn snk_words_have_exactly_k_ones() {
        for n in 1..=5 {
            for k in 0..=n {
                let mut got = snk_words(n, k);
                got.sort();
                let want = binary_words_with(n, |ones| ones == k);
                assert_eq!(got, want, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn monotone_set_validation() {
        assert!(MonotoneSet::new(2, vec![vec![0, 1]]).is_err());
        assert!(MonotoneSet::new(2, vec![vec![0, 1], vec![1, 1]]).is_ok());
        let s = MonotoneSet::generated_by(3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(s.words().len(), 4);
        assert_eq!(MonotoneSet::threshold(3, 2).words().len(), 4);
    }

    #[test]
    fn lemma_trivial_cases() {
        let sp = SpaceList::single("A", 2).unwrap();
        let a0 = HermitianOperator::<f64>::from_diagonal(sp.clone(), &[1.0, 0.5]).unwrap();
        let a1 = HermitianOperator::from_diagonal(sp.clone(), &[0.2, 0.3]).unwrap();
        let r = HermitianOperator::from_diagonal(sp, &[0.1, 0.25]).unwrap();
        let c0 = verify_monotone_inequality(&a0, &a1, &r, 1, 0).unwrap();
        assert!(c0.min_eigenvalue.abs() < 1e-15);
        let c1 = verify_monotone_inequality(&a0, &a1, &r, 1, 1).unwrap();
        assert!((c1.min_eigenvalue - 0.1).abs() < 1e-15);
        let bad = HermitianOperator::from_diagonal(SpaceList::single("A", 2).unwrap(), &[2.0, 0.0]).unwrap();
        assert!(matches!(
            verify_monotone_inequality(&a0, &a1, &bad, 2, 1),
            Err(Error::NotPsd { .. })
        ));
    }

    fn hedging_witness() -> (crate::game::OutcomeOperators<f64>, DualWitness<f64>) {
        use crate::sdp::{optimize, SolverOptions};
        let g = crate::hedging::game();
        let opt = optimize(&g, &g.outcomes()[1], &SolverOptions::default(), WitnessMeta::new("solver", 1)).unwrap();
        (g, opt.witness.unwrap())
    }

    #[test]
    fn hedging_constructions() {
        use crate::game::{parallel_game, threshold_objective};
        let (g, w) = hedging_witness();
        let p = w.value();
        assert!((p - crate::hedging::single_round_value()).abs() < 1e-7);
        let g2 = parallel_game(&g, 2).unwrap();
        for k in 0..=2 {
            let obj = threshold_objective(&g, 2, k).unwrap();
            let s = witness_recursive_snk(&w, &g, 2, k).unwrap();
            assert!((s.value() - snk_value(p, 2, k)).abs() < 1e-10);
            assert!(check_dual_feasibility(&g2, &obj, &s, 1e-9).unwrap().feasible, "snk k={k}");
            let nv = witness_naive(&w, &g, 2, k).unwrap();
            assert!((nv.value() - naive_value(p, 2, k)).abs() < 1e-10);
            assert!(check_dual_feasibility(&g2, &obj, &nv, 1e-9).unwrap().feasible, "naive k={k}");
        }
        let t = witness_tensor_power(&w, &g, 2).unwrap();
        assert!((t.value() - p * p).abs() < 1e-10);
        let raw = binomial_witness_unchecked(&g, &w, 2, 1).unwrap();
        let obj = threshold_objective(&g, 2, 1).unwrap();
        assert!(!check_dual_feasibility(&g2, &obj, &raw, 1e-9).unwrap().feasible);
        assert!(matches!(witness_classical_binomial(&w, &g, 2, 1), Err(Error::NonDiagonal(_))));
        assert_eq!(witness_recursive_snk(&w, &g, 1, 1).unwrap().value(), w.value());
    }

    #[test]
    fn scalar_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert!((naive_value(0.5, 2, 0) - 2.25).abs() < 1e-15);
        assert!((binomial_tail(0.3, 4, 0) - 1.0).abs() < 1e-15);
        assert!((snk_value(0.5, 4, 3) - 0.5).abs() < 1e-15);
    }
}
