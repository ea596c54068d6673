//! Exhaustive and random generators for formulas, sequents and terms.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::intern::{Id, Node, Universe};
use crate::mall::{prove_mall, ProveOutcome, SearchLimits};
use crate::proof::Proof;
use crate::syntax::{neg, BinOp, Formula, Sequent};

const BINOPS: [BinOp; 4] = [BinOp::Tensor, BinOp::Par, BinOp::With, BinOp::Plus];

/// All MALL formulas over `atoms` with node count at most `max_size`,
/// grouped by size (index 0 is empty). Ids increase with size when the
/// universe starts empty.
pub fn mall_formulas_by_size(u: &mut Universe, atoms: &[&str], max_size: usize) -> Vec<Vec<Id>> {
    let mut by_size: Vec<Vec<Id>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    for a in atoms {
        by_size[1].push(u.lit(a, false));
        by_size[1].push(u.lit(a, true));
    }
    for n in [Node::One, Node::Bot, Node::Zero, Node::Top] {
        by_size[1].push(u.mk(n));
    }
    for size in 2..=max_size {
        let mut cur = Vec::new();
        for ls in 1..size - 1 {
            let rs = size - 1 - ls;
            for &l in &by_size[ls] {
                for &r in &by_size[rs] {
                    for op in 0..4 {
                        let node = match op {
                            0 => Node::Tensor(l, r),
                            1 => Node::Par(l, r),
                            2 => Node::With(l, r),
                            _ => Node::Plus(l, r),
                        };
                        cur.push(u.mk(node));
                    }
                }
            }
        }
        by_size[size] = cur;
    }
    by_size
}

/// Calls `f` on every multiset of formulas from `by_size` whose sizes sum
/// to at most `max_total`, including the empty one. Sequents are passed
/// sorted by id.
pub fn for_each_sequent(by_size: &[Vec<Id>], max_total: u32, mut f: impl FnMut(&[Id])) {
    let all: Vec<Id> = by_size.iter().flatten().copied().collect();
    let mut cur: Vec<Id> = Vec::new();
    let mut sorted: Vec<Id> = Vec::new();
    fn go(
        all: &[Id],
        sizes: &[u32],
        start: usize,
        budget: u32,
        cur: &mut Vec<Id>,
        sorted: &mut Vec<Id>,
        f: &mut impl FnMut(&[Id]),
    ) {
        sorted.clear();
        sorted.extend_from_slice(cur);
        sorted.sort_unstable();
        f(sorted);
        for i in start..all.len() {
            let s = sizes[i];
            if s > budget {
                // sizes are nondecreasing along `all`
                break;
            }
            cur.push(all[i]);
            go(all, sizes, i, budget - s, cur, sorted, f);
            cur.pop();
        }
    }
    let flat_sizes: Vec<u32> = by_size.iter().enumerate().flat_map(|(s, v)| std::iter::repeat_n(s as u32, v.len())).collect();
    go(&all, &flat_sizes, 0, max_total, &mut cur, &mut sorted, &mut f);
}

/// Random MALL formula with exactly `size` nodes (odd sizes; even sizes
/// are rounded down).
pub fn random_mall_formula<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    if size <= 2 {
        let k = rng.gen_range(0..atoms.len() * 2 + 4);
        return match k.checked_sub(atoms.len() * 2) {
            None => {
                let a = atoms[k / 2];
                if k % 2 == 0 {
                    Formula::Atom(a.into())
                } else {
                    Formula::DualAtom(a.into())
                }
            }
            Some(0) => Formula::One,
            Some(1) => Formula::Bot,
            Some(2) => Formula::Zero,
            _ => Formula::Top,
        };
    }
    let inner = size - 1;
    let left = 2 * rng.gen_range(0..inner / 2) + 1;
    let right = inner - left;
    let op = *BINOPS.choose(rng).unwrap();
    op.build(random_mall_formula(rng, atoms, left), random_mall_formula(rng, atoms, right))
}

/// Random MALL sequent of total size at most `max_total` with at least
/// `min_total` when reachable.
pub fn random_mall_sequent<R: Rng>(rng: &mut R, atoms: &[&str], min_total: usize, max_total: usize) -> Sequent {
    let target = rng.gen_range(min_total.max(1)..=max_total);
    let mut left = target;
    let mut fs = Vec::new();
    while left > 0 {
        let mut s = rng.gen_range(1..=left);
        if s % 2 == 0 {
            s -= 1;
        }
        fs.push(random_mall_formula(rng, atoms, s));
        left -= s;
    }
    Sequent::new(fs)
}

fn prove_with<R: Rng>(rng: &mut R, atoms: &[&str], f: &Formula, max_ctx: usize, tries: usize) -> Option<Proof> {
    for _ in 0..tries {
        let ctx = random_mall_sequent(rng, atoms, 1, max_ctx);
        let s = ctx.with_added(std::slice::from_ref(f));
        if let Ok(ProveOutcome::Proof(p)) = prove_mall(&s, SearchLimits::default()) {
            return Some(p);
        }
    }
    None
}

/// Cuts between prover outputs. Draws a cut formula `A` of odd size at most
/// `max_formula` and contexts of total size at most `max_ctx` until both
/// `|- Γ, A` and `|- A^, Δ` are provable, then cuts them. Each further cut
/// picks a formula `B` of the current conclusion and cuts it against a
/// proof of `|- B^, Δ'`. Returns `None` when `tries` draws fail.
pub fn random_cut_composed<R: Rng>(
    rng: &mut R,
    atoms: &[&str],
    max_formula: usize,
    max_ctx: usize,
    cuts: usize,
    tries: usize,
) -> Option<Proof> {
    let mut acc: Option<Proof> = None;
    for _ in 0..tries {
        let size = 2 * rng.gen_range(0..max_formula.div_ceil(2)) + 1;
        let a = random_mall_formula(rng, atoms, size);
        let Some(left) = prove_with(rng, atoms, &a, max_ctx, 1) else { continue };
        let Some(right) = prove_with(rng, atoms, &neg(&a), max_ctx, 1) else { continue };
        acc = Proof::cut(left, right, a).ok();
        break;
    }
    let mut p = acc?;
    for _ in 1..cuts {
        let b = p.conclusion().formulas().choose(rng)?.clone();
        let right = prove_with(rng, atoms, &neg(&b), max_ctx, tries)?;
        p = Proof::cut(p, right, b).ok()?;
    }
    Some(p)
}

/// Random NNF formula of full linear logic with roughly `size` nodes.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    if size <= 1 {
        return random_mall_formula(rng, atoms, 1);
    }
    if rng.gen_bool(0.2) {
        let inner = random_formula(rng, atoms, size - 1);
        return if rng.gen_bool(0.5) { Formula::of_course(inner) } else { Formula::why_not(inner) };
    }
    if size == 2 {
        return random_mall_formula(rng, atoms, 1);
    }
    let left = rng.gen_range(1..size - 1);
    let op = *BINOPS.choose(rng).unwrap();
    op.build(random_formula(rng, atoms, left), random_formula(rng, atoms, size - 1 - left))
}

/// Random formula possibly containing `Dual` nodes and `-o`-style shapes,
/// for exercising normalization.
pub fn random_raw_formula<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Formula {
    if size > 1 && rng.gen_bool(0.15) {
        return Formula::Dual(Box::new(random_raw_formula(rng, atoms, size - 1)));
    }
    if size <= 2 {
        return random_formula(rng, atoms, 1);
    }
    match rng.gen_range(0..6) {
        0 => Formula::of_course(random_raw_formula(rng, atoms, size - 1)),
        1 => Formula::why_not(random_raw_formula(rng, atoms, size - 1)),
        _ => {
            let left = rng.gen_range(1..size - 1);
            let op = *BINOPS.choose(rng).unwrap();
            op.build(random_raw_formula(rng, atoms, left), random_raw_formula(rng, atoms, size - 1 - left))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn formula_counts() {
        let mut u = Universe::new();
        let by = mall_formulas_by_size(&mut u, &["a", "b"], 5);
        assert_eq!(by[1].len(), 8);
        assert_eq!(by[2].len(), 0);
        assert_eq!(by[3].len(), 4 * 8 * 8);
        assert_eq!(by[5].len(), 4 * 2 * 8 * 256);
    }

    #[test]
    fn sequent_enumeration_small() {
        let mut u = Universe::new();
        let by = mall_formulas_by_size(&mut u, &["a"], 1);
        let mut n = 0;
        for_each_sequent(&by, 2, |_| n += 1);
        // 6 formulas: empty + 6 singletons + 21 pairs
        assert_eq!(n, 1 + 6 + 21);
    }

    #[test]
    fn random_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let f = random_mall_formula(&mut rng, &["a", "b"], 7);
            assert_eq!(crate::syntax::size(&f), 7);
            let s = random_mall_sequent(&mut rng, &["a", "b"], 9, 12);
            assert!(s.total_size() <= 12 && s.total_size() >= 9);
        }
    }
}
