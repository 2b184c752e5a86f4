//! Inclusive associative scans with a sequential reference executor and a
//! work-efficient parallel tree executor.
//!
//! The parallel plan is the classic up-sweep / down-sweep over a balanced
//! binary tree, adapted to produce inclusive results without an identity
//! element: `ceil(log2 n)` up-sweep levels followed by
//! `ceil(log2 n) - 1` down-sweep levels, each level a batch of independent
//! combines. `combine(a, b)` is always called with `a` preceding `b` in the
//! sequence, so non-commutative operators are safe.

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanDirection {
    /// `r_t = a_1 ⊗ … ⊗ a_t`
    Forward,
    /// `r_t = a_t ⊗ … ⊗ a_N`
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Executor {
    Sequential,
    /// Tree scan distributed over the rayon pool. Inputs shorter than
    /// `min_len` fall back to the sequential fold.
    Parallel { min_len: usize },
}

impl Executor {
    pub const DEFAULT_MIN_LEN: usize = 32;

    pub fn parallel() -> Self {
        Executor::Parallel {
            min_len: Self::DEFAULT_MIN_LEN,
        }
    }

    /// Parallel plan at every size, no sequential fallback.
    pub fn parallel_always() -> Self {
        Executor::Parallel { min_len: 0 }
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self, Executor::Parallel { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Executor::Sequential => "sequential",
            Executor::Parallel { .. } => "parallel",
        }
    }
}

impl Default for Executor {
    fn default() -> Self {
        Executor::parallel()
    }
}

impl std::str::FromStr for Executor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" | "seq" => Ok(Executor::Sequential),
            "parallel" | "par" => Ok(Executor::parallel()),
            other => Err(Error::Config(format!("unknown executor '{other}'"))),
        }
    }
}

/// Infallible scan; see [`try_scan`].
pub fn scan<E, F>(
    elements: Vec<E>,
    combine: F,
    direction: ScanDirection,
    executor: Executor,
) -> Result<Vec<E>>
where
    E: Send + Sync,
    F: Fn(&E, &E) -> E + Sync,
{
    try_scan(elements, |a, b| Ok(combine(a, b)), direction, executor)
}

/// Inclusive scan with a fallible combine. The first combine error aborts
/// the scan.
pub fn try_scan<E, F>(
    elements: Vec<E>,
    combine: F,
    direction: ScanDirection,
    executor: Executor,
) -> Result<Vec<E>>
where
    E: Send + Sync,
    F: Fn(&E, &E) -> Result<E> + Sync,
{
    if elements.is_empty() {
        return Err(Error::EmptySequence);
    }
    match direction {
        ScanDirection::Forward => run(elements, &combine, executor),
        ScanDirection::Reverse => {
            let mut mirrored = elements;
            mirrored.reverse();
            let flipped = |a: &E, b: &E| combine(b, a);
            let mut out = run(mirrored, &flipped, executor)?;
            out.reverse();
            Ok(out)
        }
    }
}

fn run<E, F>(elements: Vec<E>, combine: &F, executor: Executor) -> Result<Vec<E>>
where
    E: Send + Sync,
    F: Fn(&E, &E) -> Result<E> + Sync,
{
    match executor {
        Executor::Parallel { min_len } if elements.len() >= min_len.max(2) => {
            tree_inclusive(elements, combine, true)
        }
        _ => sequential_inclusive(elements, combine),
    }
}

fn sequential_inclusive<E, F>(elements: Vec<E>, combine: &F) -> Result<Vec<E>>
where
    F: Fn(&E, &E) -> Result<E>,
{
    let mut out: Vec<E> = Vec::with_capacity(elements.len());
    for e in elements {
        let next = match out.last() {
            None => e,
            Some(prev) => combine(prev, &e)?,
        };
        out.push(next);
    }
    Ok(out)
}

// Up-sweep: a[i] ← a[i − s] ⊗ a[i] for i ≡ 2s − 1 (mod 2s).
// Down-sweep: a[i] ← a[i − s] ⊗ a[i] for i ≡ s − 1 (mod 2s), i ≥ 3s − 1.
// Within a level no index is both read as a left operand and written.
fn tree_inclusive<E, F>(mut a: Vec<E>, combine: &F, parallel: bool) -> Result<Vec<E>>
where
    E: Send + Sync,
    F: Fn(&E, &E) -> Result<E> + Sync,
{
    let n = a.len();
    let mut s = 1;
    while s < n {
        let targets: Vec<usize> = (2 * s - 1..n).step_by(2 * s).collect();
        apply_level(&mut a, &targets, s, combine, parallel)?;
        s *= 2;
    }
    s /= 2;
    while s >= 1 {
        if 3 * s - 1 < n {
            let targets: Vec<usize> = (3 * s - 1..n).step_by(2 * s).collect();
            apply_level(&mut a, &targets, s, combine, parallel)?;
        }
        s /= 2;
    }
    Ok(a)
}

fn apply_level<E, F>(a: &mut [E], targets: &[usize], stride: usize, combine: &F, parallel: bool) -> Result<()>
where
    E: Send + Sync,
    F: Fn(&E, &E) -> Result<E> + Sync,
{
    let shared: &[E] = a;
    let updates: Vec<E> = if parallel && targets.len() > 1 {
        targets
            .par_iter()
            .map(|&i| combine(&shared[i - stride], &shared[i]))
            .collect::<Result<_>>()?
    } else {
        targets
            .iter()
            .map(|&i| combine(&shared[i - stride], &shared[i]))
            .collect::<Result<_>>()?
    };
    for (&i, e) in targets.iter().zip(updates) {
        a[i] = e;
    }
    Ok(())
}

/// Critical path and work of the parallel plan for `n` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanStats {
    /// Longest chain of dependent combine applications.
    pub depth: usize,
    /// Total combine applications.
    pub combines: usize,
}

/// Instruments the tree plan by scanning depth counters: each combine
/// yields `max(depth_a, depth_b) + 1`.
pub fn scan_plan_stats(n: usize) -> PlanStats {
    if n == 0 {
        return PlanStats {
            depth: 0,
            combines: 0,
        };
    }
    let counter = std::sync::atomic::AtomicUsize::new(0);
    let depths = tree_inclusive(
        vec![0usize; n],
        &|a: &usize, b: &usize| {
            counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            Ok((*a).max(*b) + 1)
        },
        false,
    )
    .expect("depth counting cannot fail");
    PlanStats {
        depth: depths.into_iter().max().unwrap_or(0),
        combines: counter.into_inner(),
    }
}

/// Span of the parallel executor's plan for `n` elements.
pub fn scan_depth_probe(n: usize) -> usize {
    scan_plan_stats(n).depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EXECUTORS: [Executor; 3] = [
        Executor::Sequential,
        Executor::Parallel { min_len: 0 },
        Executor::Parallel { min_len: 32 },
    ];

    #[test]
    fn integer_prefix_sum() {
        for ex in EXECUTORS {
            let out = scan(vec![1, 2, 3, 4], |a, b| a + b, ScanDirection::Forward, ex).unwrap();
            assert_eq!(out, vec![1, 3, 6, 10]);
        }
    }

    #[test]
    fn string_suffix_keeps_order() {
        for ex in EXECUTORS {
            let input: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let out = scan(input, |a, b| format!("{a}{b}"), ScanDirection::Reverse, ex).unwrap();
            assert_eq!(out, vec!["abc", "bc", "c"]);
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        let r = scan(Vec::<i32>::new(), |a, b| a + b, ScanDirection::Forward, Executor::Sequential);
        assert!(matches!(r, Err(Error::EmptySequence)));
    }

    #[test]
    fn combine_error_propagates() {
        let r = try_scan(
            (0..40).collect::<Vec<i32>>(),
            |a, b| if *b == 17 { Err(Error::Conditioning) } else { Ok(a + b) },
            ScanDirection::Forward,
            Executor::parallel_always(),
        );
        assert!(matches!(r, Err(Error::Conditioning)));
    }

    #[test]
    fn depth_probe_small_cases() {
        assert_eq!(scan_depth_probe(1), 0);
        assert_eq!(scan_depth_probe(2), 1);
        assert!(scan_depth_probe(1000) <= 20);
    }

    #[test]
    fn plan_is_work_efficient() {
        for n in 1..=2048 {
            let stats = scan_plan_stats(n);
            assert!(stats.combines <= 4 * n, "n={n} combines={}", stats.combines);
        }
    }

    #[test]
    fn two_by_two_matrix_products_agree() {
        use nalgebra::Matrix2;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mats: Vec<Matrix2<f64>> = (0..64)
            .map(|_| {
                Matrix2::identity() + Matrix2::from_fn(|_, _| rng.random_range(-0.2..0.2))
            })
            .collect();
        let seq = scan(mats.clone(), |a, b| a * b, ScanDirection::Forward, Executor::Sequential).unwrap();
        let par = scan(mats, |a, b| a * b, ScanDirection::Forward, Executor::parallel_always()).unwrap();
        for (s, p) in seq.iter().zip(&par) {
            assert!((s - p).amax() <= 1e-10);
        }
    }

    // Strings concatenate exactly and are non-commutative, so equality is exact.
    proptest! {
        #[test]
        fn parallel_matches_sequential_exactly(words in prop::collection::vec("[a-z]{0,3}", 1..=64)) {
            for dir in [ScanDirection::Forward, ScanDirection::Reverse] {
                let seq = scan(words.clone(), |a, b| format!("{a}{b}"), dir, Executor::Sequential).unwrap();
                let par = scan(words.clone(), |a, b| format!("{a}{b}"), dir, Executor::parallel_always()).unwrap();
                prop_assert_eq!(seq, par);
            }
        }

        #[test]
        fn reverse_is_mirrored_forward(words in prop::collection::vec("[a-z]{1,2}", 1..=64)) {
            let rev = scan(words.clone(), |a, b| format!("{a}{b}"), ScanDirection::Reverse, Executor::parallel_always()).unwrap();
            let mut mirrored = words.clone();
            mirrored.reverse();
            let mut fwd = scan(mirrored, |a: &String, b: &String| format!("{b}{a}"), ScanDirection::Forward, Executor::Sequential).unwrap();
            fwd.reverse();
            prop_assert_eq!(rev, fwd);
        }

        #[test]
        fn integer_sums_exact(xs in prop::collection::vec(-1000i64..1000, 1..=64)) {
            let seq = scan(xs.clone(), |a, b| a + b, ScanDirection::Forward, Executor::Sequential).unwrap();
            let par = scan(xs, |a, b| a + b, ScanDirection::Forward, Executor::parallel_always()).unwrap();
            prop_assert_eq!(seq, par);
        }
    }
}
