use super::*;
use crate::ncalg::{derive_delta, GenKind, GenSymbol, NCPoly, NCWord, Tag};
use crate::scalar::{Rational, Scalar};
use num::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const A: Tag = 0;
const C: Tag = 1;
const U: Tag = 2;
const V: Tag = 3;

/// Selfadjoint `A`, `C` and unitary `U`, `V`, all with random atomic laws.
fn random_state(seed: u64) -> FreeState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FreeState::symbolic([
        AlgebraSpec::random_real(A, &mut rng),
        AlgebraSpec::random_real(C, &mut rng),
        AlgebraSpec::random_circle(U, &mut rng),
        AlgebraSpec::random_circle(V, &mut rng),
    ])
    .unwrap()
}

fn letters(tags: &[Tag]) -> Vec<GenSymbol> {
    let mut out = Vec::new();
    for &t in tags {
        if t == U || t == V {
            out.push(GenSymbol::unitary(t));
            out.push(GenSymbol::unitary(t).star());
        } else {
            out.push(GenSymbol::selfadjoint(t));
        }
    }
    out
}

fn word_over(tags: &'static [Tag], max_len: usize) -> impl Strategy<Value = NCWord> {
    let alphabet = letters(tags);
    prop::collection::vec(0..alphabet.len(), 0..=max_len).prop_map(move |ix| NCWord::from_letters(ix.into_iter().map(|i| alphabet[i])))
}

/// Every word of length at most `max_len` over `alphabet`.
fn all_words(alphabet: &[GenSymbol], max_len: usize) -> Vec<NCWord> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<GenSymbol>> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier.iter().flat_map(|w| alphabet.iter().map(move |&l| [w.clone(), vec![l]].concat())).collect();
        out.extend(frontier.iter().cloned());
    }
    out.into_iter().map(NCWord::from_letters).collect()
}

const ALL: &[Tag] = &[A, C, U, V];
const AU: &[Tag] = &[A, U];
const AC: &[Tag] = &[A, C];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_is_tracial(seed in 0u64..10_000, v in word_over(ALL, 4), w in word_over(ALL, 4)) {
        let s = random_state(seed);
        prop_assert_eq!(s.tau_word(&v.concat(&w)).unwrap(), s.tau_word(&w.concat(&v)).unwrap());
    }

    #[test]
    fn tau_is_positive(seed in 0u64..10_000, w in word_over(ALL, 4)) {
        let s = random_state(seed);
        let t = s.tau_word(&w.adjoint().concat(&w)).unwrap();
        prop_assert!(t.im.is_zero() && !t.re.is_negative(), "τ(w*w) = {}", t);
    }

    #[test]
    fn expectation_preserves_trace_and_is_idempotent(seed in 0u64..10_000, w in word_over(ALL, 5)) {
        let s = random_state(seed);
        for target in [BTreeSet::from([A]), BTreeSet::from([U]), BTreeSet::from([A, U])] {
            let f = NCPoly::word(w.clone());
            let e = s.cond_expect(&target, &f).unwrap();
            prop_assert!(e.tags().is_subset(&target));
            prop_assert_eq!(s.tau(&e).unwrap(), s.tau(&f).unwrap());
            prop_assert_eq!(s.cond_expect(&target, &e).unwrap(), e);
        }
    }

    #[test]
    fn expectation_is_bimodular(seed in 0u64..10_000, g in word_over(AU, 2), w in word_over(ALL, 4), h in word_over(AU, 2)) {
        let s = random_state(seed);
        let target = BTreeSet::from([A, U]);
        let f = NCPoly::word(w);
        let (g, h) = (NCPoly::word(g), NCPoly::word(h));
        let lhs = s.cond_expect(&target, &(&(&g * &f) * &h)).unwrap();
        let rhs = &(&g * &s.cond_expect(&target, &f).unwrap()) * &h;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coalgebra_delta_vanishes(seed in 0u64..10_000, w in word_over(AC, 6)) {
        let s = random_state(seed);
        prop_assert!(check_coalgebra_delta(&s, &BTreeSet::from([A]), &BTreeSet::from([C]), &w).unwrap().is_zero());
    }

    #[test]
    fn coalgebra_d_vanishes(seed in 0u64..10_000, k in 1usize..=5, back in 0usize..=2) {
        let s = random_state(seed);
        let uv = NCWord::from_letters([GenSymbol::unitary(U), GenSymbol::unitary(V)]);
        let w = uv.pow(k).concat(&uv.adjoint().pow(back));
        prop_assert!(check_coalgebra_d(&s, U, V, &w).unwrap().is_zero());
    }

    #[test]
    fn freeconj_pairing_vanishes(seed in 0u64..10_000, w in word_over(AU, 5)) {
        let s = random_state(seed);
        prop_assert!(check_freeconj_pairing(&s, U, &BTreeSet::from([A]), &w).unwrap().is_zero());
    }

    #[test]
    fn d_equals_minus_delta_on_conjugated_words(pieces in prop::collection::vec((0usize..2, 1usize..=2), 0..=4)) {
        let (a, b, u) = (GenSymbol::selfadjoint(A), GenSymbol::selfadjoint(C), GenSymbol::unitary(U));
        let mut w = NCWord::empty();
        for (conj, k) in pieces {
            let core = NCWord::from_letters(vec![if k == 1 { a } else { b }; k]);
            let piece = if conj == 1 { NCWord::letter(u).concat(&core).concat(&NCWord::letter(u.star())) } else { core };
            w = w.concat(&piece);
        }
        prop_assert!(check_d_equals_minus_delta(U, &BTreeSet::from([A, C]), &w).unwrap().is_zero());
    }

    #[test]
    fn graddist_is_monotone(x in 0.0f64..100.0, dx in 1e-3f64..10.0) {
        prop_assert!(graddist_bound(x) < graddist_bound(x + dx));
        prop_assert!(graddist_bound(x + dx) < 1.0);
    }
}

#[test]
fn liberation_pairing_vanishes_on_free_families() {
    let alphabet = letters(&[A, U]);
    let words = all_words(&alphabet, 6);
    for seed in 0..3 {
        let s = random_state(seed);
        for w in &words {
            let v = liberation_pairing(&s, &BTreeSet::from([A]), w).unwrap();
            assert!(v.value.is_zero(), "{w}: {v}");
        }
    }
}

#[test]
fn concurrent_tau_calls_agree() {
    let s = random_state(17);
    let words = all_words(&letters(&[A, U]), 5);
    let serial: Vec<Scalar> = words.iter().map(|w| s.tau_word(w).unwrap()).collect();
    let fresh = random_state(17);
    let parallel: Vec<Scalar> = std::thread::scope(|scope| {
        let handles: Vec<_> = words.chunks(64).map(|chunk| scope.spawn(|| chunk.iter().map(|w| fresh.tau_word(w).unwrap()).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}

// Free-cumulant oracle: τ(x_{t₁} ⋯ x_{tₙ}) = Σ_{π ∈ NC(n)} Π_{V ∈ π} [V monochrome] κ_{|V|}(t_V).

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            rec(i + 1, max.max(b), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 0, &mut cur, &mut out);
    out
}

fn non_crossing(p: &[usize]) -> bool {
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if p[a] == p[c] && p[b] == p[d] && p[a] != p[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn nc_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(n)
        .into_iter()
        .filter(|p| non_crossing(p))
        .map(|p| {
            let k = p.iter().max().map_or(0, |m| m + 1);
            (0..k).map(|b| (0..n).filter(|&i| p[i] == b).collect()).collect()
        })
        .collect()
}

fn free_cumulants(moments: &[Rational], table: &[Vec<Vec<Vec<usize>>>]) -> Vec<Rational> {
    let mut kappa = vec![Rational::zero(); moments.len()];
    for n in 1..moments.len() {
        let mut rest = Rational::zero();
        for pi in &table[n] {
            if pi.len() == 1 {
                continue;
            }
            rest += pi.iter().map(|b| kappa[b.len()].clone()).fold(Rational::from_integer(1.into()), |a, b| a * b);
        }
        kappa[n] = &moments[n] - rest;
    }
    kappa
}

#[test]
fn recursion_matches_free_cumulant_oracle() {
    let max = 8;
    let table: Vec<_> = (0..=max).map(nc_partitions).collect();
    assert_eq!(table[8].len(), 1430);
    let tags = [A, C, 4];
    for seed in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let specs: Vec<AlgebraSpec> = if seed == 0 {
            tags.iter().map(|&t| AlgebraSpec::semicircular(t, max)).collect()
        } else {
            tags.iter().map(|&t| AlgebraSpec::random_real(t, &mut rng)).collect()
        };
        let kappas: Vec<Vec<Rational>> = specs
            .iter()
            .map(|s| {
                let m: Vec<Rational> = (0..=max as i64).map(|n| s.moment(n).unwrap().re).collect();
                free_cumulants(&m, &table)
            })
            .collect();
        let state = FreeState::symbolic(specs).unwrap();
        let alphabet: Vec<GenSymbol> = tags.iter().map(|&t| GenSymbol::new(t, 0, GenKind::SelfAdjoint)).collect();
        // exhaustive through length 6, a deterministic sample of lengths 7 and 8
        for (i, w) in all_words(&alphabet, 8).into_iter().enumerate() {
            if w.len() > 6 && i % 13 != 0 {
                continue;
            }
            let idx: Vec<usize> = w.letters().iter().map(|l| tags.iter().position(|&t| t == l.tag).unwrap()).collect();
            let mut oracle = Rational::zero();
            for pi in &table[w.len()] {
                let mut prod = Rational::from_integer(1.into());
                for block in pi {
                    let c = idx[block[0]];
                    if block.iter().any(|&i| idx[i] != c) {
                        prod = Rational::zero();
                        break;
                    }
                    prod *= &kappas[c][block.len()];
                }
                oracle += prod;
            }
            assert_eq!(state.tau_word(&w).unwrap(), Scalar::real(oracle), "{w}");
        }
    }
}

#[test]
fn semicircular_examples() {
    let s = FreeState::symbolic([AlgebraSpec::semicircular(A, 16), AlgebraSpec::semicircular(C, 16)]).unwrap();
    let (x, y) = (GenSymbol::selfadjoint(A), GenSymbol::selfadjoint(C));
    assert_eq!(s.tau_word(&NCWord::empty()).unwrap(), Scalar::one());
    assert_eq!(s.tau_word(&NCWord::from_letters([x, y, x, y])).unwrap(), Scalar::zero());
    assert_eq!(s.tau_word(&NCWord::from_letters([x, x, y, y])).unwrap(), Scalar::one());
    let t = derive_delta(&BTreeSet::from([A]), &NCPoly::word(NCWord::from_letters([x, y, x])));
    // δ(aba) = a⊗ba − 1⊗aba + aba⊗1 − ab⊗a
    let tau = |w: &[GenSymbol]| s.tau_word(&NCWord::from_letters(w.iter().copied())).unwrap();
    let expected = &(&(&tau(&[x]) * &tau(&[y, x])) - &tau(&[x, y, x])) + &(&tau(&[x, y, x]) - &(&tau(&[x, y]) * &tau(&[x])));
    assert_eq!(s.tau_tensor(&t).unwrap(), expected);
}

#[test]
fn expectation_examples() {
    let s = random_state(42);
    let (a, c) = (GenSymbol::selfadjoint(A), GenSymbol::selfadjoint(C));
    let target = BTreeSet::from([A]);
    let tau = |w: &[GenSymbol]| s.tau_word(&NCWord::from_letters(w.iter().copied())).unwrap();
    assert_eq!(s.cond_expect(&target, &NCPoly::letter(a)).unwrap(), NCPoly::letter(a));
    let e = s.cond_expect(&target, &NCPoly::word(NCWord::from_letters([a, c]))).unwrap();
    assert_eq!(e, NCPoly::letter(a).scale(&tau(&[c])));
    // centered c: E(ac̊) = 0, and both sides of the coalgebra identity vanish
    let centered = &NCPoly::word(NCWord::from_letters([a, c])) - &NCPoly::letter(a).scale(&tau(&[c]));
    assert!(s.cond_expect(&target, &centered).unwrap().is_zero());
}
