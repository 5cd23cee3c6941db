//! Derived constructors: n-ary identities, knights, copies and discards,
//! permutations and projections. All n-ary products nest to the left.
//!
//! [`GradedTerm::then`] and [`GradedTerm::tensor`] drop units (`id0`, and
//! identity wirings in sequence) so that generated terms stay readable; the
//! raw `seq`/`par` constructors never simplify.

use super::{Generator, GradedTerm};
use crate::grading::Injection;

fn left_nested(n: usize, unit: impl Fn() -> GradedTerm) -> GradedTerm {
    match n {
        0 => GradedTerm::Id0,
        _ => (1..n).fold(unit(), |acc, _| GradedTerm::par(acc, unit())),
    }
}

impl GradedTerm {
    /// `id_n`.
    pub fn id(n: usize) -> Self {
        left_nested(n, || GradedTerm::Id1)
    }

    /// `knight^a: 0 ->_a a`.
    pub fn knights(a: usize) -> Self {
        left_nested(a, GradedTerm::knight)
    }

    /// `n -> 0`, one `del` per wire.
    pub fn dels(n: usize) -> Self {
        left_nested(n, || GradedTerm::gen(Generator::Del))
    }

    /// `1 -> n`: `n` copies of one wire. `n = 0` discards it.
    pub fn copies(n: usize) -> Self {
        match n {
            0 => GradedTerm::gen(Generator::Del),
            1 => GradedTerm::Id1,
            _ => GradedTerm::gen(Generator::Copy)
                .then(GradedTerm::copies(n - 1).tensor(GradedTerm::Id1)),
        }
    }

    /// True for `id0`, `id1` and tensor products of them.
    pub fn is_identity_wiring(&self) -> bool {
        match self {
            GradedTerm::Id0 | GradedTerm::Id1 => true,
            GradedTerm::Par(f, g) => f.is_identity_wiring() && g.is_identity_wiring(),
            _ => false,
        }
    }

    /// Sequential composition that drops identity wirings on either side.
    pub fn then(self, next: GradedTerm) -> GradedTerm {
        if next.is_identity_wiring() {
            self
        } else if self.is_identity_wiring() {
            next
        } else {
            GradedTerm::seq(self, next)
        }
    }

    /// Parallel composition that drops `id0` on either side.
    pub fn tensor(self, other: GradedTerm) -> GradedTerm {
        match (self, other) {
            (GradedTerm::Id0, g) => g,
            (f, GradedTerm::Id0) => f,
            (f, g) => GradedTerm::par(f, g),
        }
    }

    /// Tensor of a sequence of terms, nested to the left.
    pub fn tensor_all(terms: impl IntoIterator<Item = GradedTerm>) -> GradedTerm {
        terms
            .into_iter()
            .fold(GradedTerm::Id0, |acc, t| acc.tensor(t))
    }

    /// `k -> k` wiring whose output `j` is input `perm[j]`, as a ladder of
    /// adjacent swaps. `perm` must be a permutation of `0..k`.
    pub fn permutation(perm: &[usize]) -> GradedTerm {
        let k = perm.len();
        let mut rank = vec![0; k];
        for (pos, &src) in perm.iter().enumerate() {
            rank[src] = pos;
        }
        // Bubble sort the current arrangement of input labels towards `perm`.
        let mut current: Vec<usize> = (0..k).collect();
        let mut out = GradedTerm::id(k);
        while let Some(i) =
            (0..k.saturating_sub(1)).find(|&i| rank[current[i]] > rank[current[i + 1]])
        {
            current.swap(i, i + 1);
            let layer = GradedTerm::id(i)
                .tensor(GradedTerm::Swap)
                .tensor(GradedTerm::id(k - i - 2));
            out = out.then(layer);
        }
        out
    }

    /// `n + m -> m + n` block swap.
    pub fn swap_block(n: usize, m: usize) -> GradedTerm {
        let perm: Vec<usize> = (n..n + m).chain(0..n).collect();
        GradedTerm::permutation(&perm)
    }

    /// The 0-graded circuit of a grading morphism `t: b -> a` (an injection
    /// `[a] -> [b]`): route input `t(j)` to output `j` and discard the rest.
    pub fn injection_circuit(t: &Injection) -> GradedTerm {
        let b = t.dom_grade();
        let selected = t.map();
        let mut perm: Vec<usize> = selected.to_vec();
        perm.extend((0..b).filter(|i| !selected.contains(i)));
        let dropped = b - selected.len();
        GradedTerm::permutation(&perm).then(
            GradedTerm::id(selected.len()).tensor(GradedTerm::dels(dropped)),
        )
    }

    /// `n -> 2n` copying a bundle of wires: `(x_1..x_n) -> (x_1..x_n, x_1..x_n)`.
    pub fn copy_bundle(n: usize) -> GradedTerm {
        GradedTerm::copy_bundle_k(n, 2)
    }

    /// `n -> k*n`: `k` copies of a bundle of `n` wires, bundle after bundle.
    pub fn copy_bundle_k(n: usize, k: usize) -> GradedTerm {
        let copies = GradedTerm::tensor_all((0..n).map(|_| GradedTerm::copies(k)));
        // After the per-wire copies, copy c of wire w sits at position w*k + c.
        let perm: Vec<usize> = (0..k)
            .flat_map(|c| (0..n).map(move |w| w * k + c))
            .collect();
        copies.then(GradedTerm::permutation(&perm))
    }
}
