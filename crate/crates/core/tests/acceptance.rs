//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any gated criterion fails.

// Tolerance checks are written as `!(x <= tol)` on purpose so NaN fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use ncwreath::algebra::{BasisIndex, MatrixBlock, MultiMatrixAlgebra};
use ncwreath::decorated::decorated_hom_dimension;
use ncwreath::fusion::{
    a_rep_trivial_multiplicity, alternating_dimension, combination_dimension, dimension, free_product_fusion,
    fusion_product, involution, multiplicity_of_trivial, AlternatingWord, Combination, RepCombination, Word,
    WordRing,
};
use ncwreath::group::{Group, GroupElement};
use ncwreath::partition::{self, catalan, Partition, PointRef};
use ncwreath::tensor_maps::{build_map, gram_rank, maps_for, verify_composition, TensorMap};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c4() -> MultiMatrixAlgebra {
    MultiMatrixAlgebra::uniform_diagonal(4).unwrap()
}

fn m2() -> MultiMatrixAlgebra {
    MultiMatrixAlgebra::full_matrix(&[0.5, 0.5]).unwrap()
}

fn s3() -> Group {
    Group::from_table_file(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/s3.json")).unwrap()
}

fn u(i: usize) -> PointRef {
    PointRef::upper(i)
}

fn l(i: usize) -> PointRef {
    PointRef::lower(i)
}

/// All partitions with at most `max_points` points, keyed by shape.
fn partitions_up_to(max_points: usize) -> HashMap<(usize, usize), Vec<Partition>> {
    let mut out = HashMap::new();
    for n in 0..=max_points {
        for k in 0..=n {
            out.insert((k, n - k), partition::enumerate(k, n - k).unwrap());
        }
    }
    out
}

fn ac1() -> Outcome {
    let expected: [u64; 11] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
    let z2 = Group::cyclic(2).unwrap();
    for (k, &c) in expected.iter().enumerate() {
        let enumerated = partition::enumerate(0, k).map_err(|e| e.to_string())?.len() as u64;
        let decorated = decorated_hom_dimension(&z2, &[], &vec![z2.identity(); k]).map_err(|e| e.to_string())?;
        ensure!(catalan(k) == BigUint::from(c), "catalan({k}) is {}", catalan(k));
        ensure!(enumerated == c, "|NC(0,{k})| = {enumerated}, expected {c}");
        ensure!(decorated == c, "dim Hom(1, a(e)^{k}) = {decorated}, expected {c}");
    }
    Ok("|NC(0,k)| = C_k = dim Hom(1, a(e)^k) for k = 0..10".into())
}

fn ac2() -> Outcome {
    let m = |i: usize| l(i);
    let p = Partition::from_blocks(
        4,
        17,
        vec![
            vec![u(1), m(1), m(2), m(3)],
            vec![u(2), m(4), m(5), m(6), m(7), m(8)],
            vec![u(3), m(9), m(10), m(11)],
            vec![m(12)],
            vec![u(4), m(13), m(17)],
            vec![m(14), m(15), m(16)],
        ],
    )
    .map_err(|e| e.to_string())?;
    let q = Partition::from_blocks(
        17,
        5,
        vec![
            vec![u(1), u(2), u(3), l(1), l(2)],
            vec![u(4), u(5), l(3)],
            vec![u(6), u(7), u(8), u(9), u(10), l(4), l(5)],
            vec![u(11)],
            vec![u(12)],
            vec![u(13), u(14)],
            vec![u(15), u(16), u(17)],
        ],
    )
    .map_err(|e| e.to_string())?;
    let comp = p.compose(&q).map_err(|e| e.to_string())?;
    let expected = Partition::from_blocks(
        4,
        5,
        vec![vec![u(1), l(1), l(2)], vec![u(2), u(3), l(3), l(4), l(5)], vec![u(4)]],
    )
    .unwrap();
    let got = (
        p.block_count(),
        q.block_count(),
        comp.result.block_count(),
        comp.central_blocks,
        comp.cycles,
    );
    ensure!(got == (6, 7, 3, 1, 8), "(b(p), b(q), b(qp), cb, cy) = {got:?}");
    ensure!(comp.result == expected, "composite is {}", comp.result);
    Ok("b(p)=6 b(q)=7 b(qp)=3 cb=1 cy=8".into())
}

/// `cy(p, sr) = cy(p, r) + cy(rp, s) − cy(r, s)` with `p` on top.
fn cycle_relation(p: &Partition, r: &Partition, s: &Partition) -> Result<(), String> {
    let pr = p.compose(r).unwrap();
    let rs = r.compose(s).unwrap();
    let p_rs = p.compose(&rs.result).unwrap();
    let pr_s = pr.result.compose(s).unwrap();
    ensure!(p_rs.result == pr_s.result, "composition is not associative at {p} | {r} | {s}");
    let lhs = p_rs.cycles as i64;
    let rhs = pr.cycles as i64 + pr_s.cycles as i64 - rs.cycles as i64;
    ensure!(lhs == rhs, "cycle relation fails at {p} | {r} | {s}: {lhs} vs {rhs}");
    Ok(())
}

fn ac3() -> Outcome {
    let small = partitions_up_to(5);
    let mut exhaustive = 0u64;
    for ((_, b), ps) in &small {
        for ((b2, c), rs) in &small {
            if b2 != b {
                continue;
            }
            for ((c2, _), ss) in &small {
                if c2 != c {
                    continue;
                }
                for p in ps {
                    for r in rs {
                        for s in ss {
                            cycle_relation(p, r, s)?;
                            exhaustive += 1;
                        }
                    }
                }
            }
        }
    }
    let large = partitions_up_to(10);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut random = 0;
    while random < 1000 {
        let sizes: Vec<usize> = (0..4).map(|_| rng.random_range(2..=6)).collect();
        let shapes = [(sizes[0], sizes[1]), (sizes[1], sizes[2]), (sizes[2], sizes[3])];
        if shapes.iter().all(|&(x, y)| x + y <= 5) || shapes.iter().any(|&(x, y)| x + y > 10) {
            continue;
        }
        let pick = |rng: &mut ChaCha8Rng, shape| {
            let all = &large[&shape];
            all[rng.random_range(0..all.len())].clone()
        };
        let (p, r, s) = (pick(&mut rng, shapes[0]), pick(&mut rng, shapes[1]), pick(&mut rng, shapes[2]));
        cycle_relation(&p, &r, &s)?;
        random += 1;
    }
    Ok(format!("{exhaustive} exhaustive triples, {random} random triples up to 10 points"))
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let shapes = partitions_up_to(6);
    let mut pairs = 0u64;
    let mut worst: f64 = 0.0;
    let mut worst_other: f64 = 0.0;
    for alg in [c4(), m2()] {
        let delta = alg.is_delta_form().ok_or("test algebra is not a δ-form")?;
        let mut maps: HashMap<Partition, TensorMap> = HashMap::new();
        for ps in shapes.values() {
            for p in ps {
                maps.insert(p.clone(), build_map(&alg, p).map_err(|e| e.to_string())?);
            }
        }
        for (&(k, m), ps) in &shapes {
            for w in 0..=6usize.saturating_sub(m) {
                if k + w > 6 {
                    continue;
                }
                for p in ps {
                    for q in &shapes[&(m, w)] {
                        let comp = p.compose(q).unwrap();
                        let via = maps[p].then(&maps[q]).unwrap().scaled(delta.powi(-(comp.cycles as i32)));
                        worst = worst.max(maps[&comp.result].max_deviation(&via));
                        pairs += 1;
                    }
                }
            }
        }
        for (p, tp) in &maps {
            worst_other = worst_other.max(maps[&p.adjoint()].max_deviation(&tp.adjoint()));
            if p.total_points() <= 3 {
                for (q, tq) in maps.iter().filter(|(q, _)| p.total_points() + q.total_points() <= 6) {
                    let direct = &maps[&p.tensor(q)];
                    worst_other = worst_other.max(direct.max_deviation(&tp.tensor(tq)));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(worst <= 1e-9, "functoriality deviation {worst:e}");
    ensure!(worst_other <= 1e-12, "tensor/adjoint deviation {worst_other:e}");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "{pairs} pairs, max deviation {worst:.1e}, tensor/adjoint {worst_other:.1e}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// Structure constants of the product in the normalized basis:
/// `b_ij b_jl = Q_j^{-1/2} b_il`.
fn multiplication_oracle(alg: &MultiMatrixAlgebra) -> DMatrix<f64> {
    let basis = alg.basis();
    let n = basis.len();
    let pos = |x: &BasisIndex| basis.iter().position(|y| y == x).unwrap();
    let mut m = DMatrix::zeros(n, n * n);
    for x in &basis {
        for y in &basis {
            if x.block == y.block && x.col == y.row {
                let q = alg.blocks()[x.block].q[x.col];
                let target = BasisIndex::new(x.block, x.row, y.col);
                m[(pos(&target), pos(x) * n + pos(y))] = q.powf(-0.5);
            }
        }
    }
    m
}

fn ac5() -> Outcome {
    let mut worst: f64 = 0.0;
    for alg in [c4(), m2()] {
        let t = build_map(&alg, &Partition::one_block(2, 1)).map_err(|e| e.to_string())?;
        let oracle = multiplication_oracle(&alg);
        ensure!(t.matrix().shape() == oracle.shape(), "shape {:?}", t.matrix().shape());
        worst = worst.max((t.matrix() - &oracle).abs().max());
    }
    ensure!(worst <= 1e-12, "deviation {worst:e}");
    Ok(format!("max deviation {worst:.1e} on C^4 and M_2"))
}

fn ac6() -> Outcome {
    let mut checked = 0;
    for alg in [c4(), m2()] {
        for n in 0..=6 {
            for k in 0..=n {
                let maps = maps_for(&alg, k, n - k).map_err(|e| e.to_string())?;
                let rank = gram_rank(&maps).map_err(|e| e.to_string())?;
                ensure!(rank == maps.len(), "rank {rank} < {} on NC({k},{})", maps.len(), n - k);
                checked += 1;
            }
        }
    }
    let c2 = MultiMatrixAlgebra::uniform_diagonal(2).unwrap();
    let rank = gram_rank(&maps_for(&c2, 0, 4).unwrap()).unwrap();
    ensure!(rank < 14, "rank on C^2 is {rank}");
    Ok(format!("full rank on {checked} shapes; rank {rank} < 14 on C^2"))
}

/// Coarsest grouping of blocks into δ-form pieces, by trying every set
/// partition of the blocks.
fn grouping_oracle(alg: &MultiMatrixAlgebra) -> Vec<Vec<usize>> {
    fn set_partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for i in 0..n {
            let mut next = Vec::new();
            for rgs in out {
                let top = rgs.iter().copied().max().map_or(0, |m| m + 1);
                for label in 0..=top.min(i) {
                    let mut r: Vec<usize> = rgs.clone();
                    r.push(label);
                    next.push(r);
                }
            }
            out = next;
        }
        out
    }
    let blocks = alg.blocks();
    let is_delta = |members: &[usize]| {
        let mass: f64 = members.iter().flat_map(|&a| &blocks[a].q).sum();
        let traces: Vec<f64> = members
            .iter()
            .map(|&a| blocks[a].q.iter().map(|q| mass / q).sum())
            .collect();
        traces.iter().all(|t| (t - traces[0]).abs() <= 1e-9 * traces[0])
    };
    let mut best: Option<Vec<Vec<usize>>> = None;
    for rgs in set_partitions(blocks.len()) {
        let parts = rgs.iter().max().map_or(0, |m| m + 1);
        let groups: Vec<Vec<usize>> =
            (0..parts).map(|g| (0..rgs.len()).filter(|&a| rgs[a] == g).collect()).collect();
        if groups.iter().all(|g| is_delta(g)) && best.as_ref().is_none_or(|b| groups.len() < b.len()) {
            best = Some(groups);
        }
    }
    best.unwrap()
}

fn random_algebra(rng: &mut ChaCha8Rng, blocks: usize) -> MultiMatrixAlgebra {
    let targets = [2.0, 3.5, 5.0];
    let mut out = Vec::new();
    for _ in 0..blocks {
        let size = rng.random_range(1..=3);
        let t = targets[rng.random_range(0..targets.len())];
        let r: Vec<f64> = (0..size).map(|_| rng.random_range(0.5..2.0)).collect();
        let inv: f64 = r.iter().map(|x| 1.0 / x).sum();
        out.push(r.iter().map(|x| x * inv / t).collect::<Vec<f64>>());
    }
    let mass: f64 = out.iter().flatten().sum();
    MultiMatrixAlgebra::new(
        out.into_iter()
            .map(|q| MatrixBlock { size: q.len(), q: q.iter().map(|x| x / mass).collect() })
            .collect(),
    )
    .unwrap()
}

fn ac7() -> Outcome {
    for alg in [c4(), m2()] {
        let delta = alg.is_delta_form().ok_or("dim-4 algebra is not a δ-form")?;
        ensure!((delta - 4.0).abs() <= 1e-12, "δ = {delta}");
        let m = Partition::multiplication();
        let dev = verify_composition(&alg, &m.adjoint(), &m).map_err(|e| e.to_string())?;
        ensure!(dev <= 1e-9, "m m* deviates from δ id by {dev:e}");
        let tm = build_map(&alg, &m).unwrap();
        let mm = tm.matrix() * tm.matrix().transpose();
        let id = DMatrix::<f64>::identity(4, 4) * delta;
        ensure!((mm - id).abs().max() <= 1e-9, "m m* != δ id");
    }
    let mut weights = vec![1.0 / 6.0; 3];
    weights.extend([1.0 / 10.0; 5]);
    let mixed = MultiMatrixAlgebra::diagonal(&weights).unwrap();
    ensure!(mixed.is_delta_form().is_none(), "C^3 + C^5 reported as a δ-form");
    let factors = mixed.decompose_by_delta();
    let deltas: Vec<f64> = factors.iter().map(|f| f.delta).collect();
    ensure!(factors.len() == 2, "{} factors", factors.len());
    ensure!((deltas[0] - 3.0).abs() < 1e-9 && (deltas[1] - 5.0).abs() < 1e-9, "δ_i = {deltas:?}");
    let mut cases = vec![mixed];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let c = rng.random_range(1..=4);
        cases.push(random_algebra(&mut rng, c));
    }
    for alg in &cases {
        let got: Vec<Vec<usize>> = alg.decompose_by_delta().into_iter().map(|f| f.blocks).collect();
        let oracle = grouping_oracle(alg);
        ensure!(got == oracle, "decomposition {got:?} vs oracle {oracle:?}");
        for f in alg.decompose_by_delta() {
            let d = f.algebra.is_delta_form().ok_or("factor is not a δ-form")?;
            ensure!((d - f.delta).abs() <= 1e-9 * d, "factor δ {d} vs {}", f.delta);
        }
    }
    Ok(format!("δ = 4 on both, m m* = δ id, {} decompositions match the oracle", cases.len()))
}

fn words_up_to(letters: &[GroupElement], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&g| Word::new([w.letters(), &[g]].concat())))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn conjugate(group: &Group, c: &RepCombination) -> RepCombination {
    let mut out = Combination::new();
    for (w, m) in c.iter() {
        out.add(involution(group, w).unwrap(), m);
    }
    out
}

fn fusion_checks(group: &Group, letters: &[GroupElement], rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let words = words_up_to(letters, 3);
    let err = |e: ncwreath::FusionError| e.to_string();
    let mut products = HashMap::new();
    for x in &words {
        for y in &words {
            products.insert((x.clone(), y.clone()), fusion_product(group, x, y).map_err(err)?);
        }
    }
    let mut checks = 0;
    for x in &words {
        ensure!(products[&(Word::empty(), x.clone())] == Combination::single(x.clone()), "left unit fails at {x:?}");
        ensure!(products[&(x.clone(), Word::empty())] == Combination::single(x.clone()), "right unit fails at {x:?}");
        let xbar = involution(group, x).map_err(err)?;
        for y in &words {
            let prod = &products[&(x.clone(), y.clone())];
            let trivial = prod.multiplicity(&Word::empty());
            ensure!(trivial == (*y == xbar) as u64, "trivial multiplicity {trivial} at {x:?} {y:?}");
            ensure!(trivial == multiplicity_of_trivial(group, x, y).map_err(err)?, "multiplicity_of_trivial");
            let ybar = involution(group, y).map_err(err)?;
            ensure!(
                conjugate(group, prod) == fusion_product(group, &ybar, &xbar).map_err(err)?,
                "conjugation symmetry fails at {x:?} {y:?}"
            );
            for n in [4, 5, 9] {
                let lhs = combination_dimension(group, prod, n).map_err(err)?;
                let rhs: BigInt = dimension(group, x, n).map_err(err)? * dimension(group, y, n).map_err(err)?;
                ensure!(lhs == rhs, "dimension is not multiplicative at {x:?} {y:?} n={n}");
            }
            checks += 1;
        }
    }
    // Associativity: exhaustive when small, otherwise a seeded sample.
    let triples = words.len().pow(3);
    let assoc = |x: &Word, y: &Word, z: &Word| -> Result<bool, String> {
        let mut left = Combination::new();
        for (xy, m) in products[&(x.clone(), y.clone())].iter() {
            left.add_all(&fusion_product(group, xy, z).map_err(err)?, m);
        }
        let mut right = Combination::new();
        for (yz, m) in products[&(y.clone(), z.clone())].iter() {
            right.add_all(&fusion_product(group, x, yz).map_err(err)?, m);
        }
        Ok(left == right)
    };
    if triples <= 100_000 {
        for x in &words {
            for y in &words {
                for z in &words {
                    ensure!(assoc(x, y, z)?, "associativity fails at {x:?} {y:?} {z:?}");
                }
            }
        }
    } else {
        for _ in 0..20_000 {
            let mut pick = || words[rng.random_range(0..words.len())].clone();
            let (x, y, z) = (pick(), pick(), pick());
            ensure!(assoc(&x, &y, &z)?, "associativity fails at {x:?} {y:?} {z:?}");
        }
    }
    Ok(checks)
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let integers = Group::integers();
    let int_letters: Vec<GroupElement> = (-2..=2).map(|v| integers.element(v).unwrap()).collect();
    let mut summary = Vec::new();
    for (name, group, letters) in [
        ("Z2", Group::cyclic(2).unwrap(), None),
        ("Z3", Group::cyclic(3).unwrap(), None),
        ("Z", integers.clone(), Some(int_letters)),
        ("S3", s3(), None),
    ] {
        let letters = letters.unwrap_or_else(|| group.elements().unwrap());
        let pairs = fusion_checks(&group, &letters, &mut rng)?;
        summary.push(format!("{name}:{pairs}"));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("word pairs checked {}, {:.1}s", summary.join(" "), elapsed.as_secs_f64()))
}

fn tuples(letters: &[GroupElement], max_len: usize) -> Vec<Vec<GroupElement>> {
    words_up_to(letters, max_len).into_iter().map(|w| w.letters().to_vec()).collect()
}

fn compare_counts(group: &Group) -> (usize, Vec<String>) {
    let mut mismatches = Vec::new();
    let all = tuples(&group.elements().unwrap(), 5);
    for t in &all {
        let fusion = a_rep_trivial_multiplicity(group, t).unwrap();
        let diagrams = decorated_hom_dimension(group, &[], t).unwrap();
        if fusion != diagrams {
            let names: Vec<String> = t.iter().map(|&g| group.name(g)).collect();
            mismatches.push(format!("({}) fusion {fusion} diagrams {diagrams}", names.join(",")));
        }
    }
    (all.len(), mismatches)
}

fn ac9() -> Outcome {
    let mut total = 0;
    for group in [Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()] {
        let (n, mismatches) = compare_counts(&group);
        ensure!(mismatches.is_empty(), "{} mismatches, first {}", mismatches.len(), mismatches[0]);
        total += n;
    }
    let (n, mismatches) = compare_counts(&s3());
    let report = if mismatches.is_empty() {
        format!("S3 agrees on all {n} tuples")
    } else {
        format!("S3 disagrees on {} of {n} tuples, e.g. {}", mismatches.len(), mismatches[0])
    };
    println!("       S3 report: {report}");
    Ok(format!("Z2 and Z3 agree on {total} tuples; {report}"))
}

fn ac10() -> Outcome {
    let z2 = Group::cyclic(2).unwrap();
    let rings = vec![WordRing::new(z2.clone(), 4).unwrap(), WordRing::new(z2.clone(), 5).unwrap()];
    let err = |e: ncwreath::FusionError| e.to_string();
    let labels: Vec<Word> = words_up_to(&z2.elements().unwrap(), 2).into_iter().filter(|w| !w.is_empty()).collect();

    let mut words = vec![AlternatingWord::empty()];
    let mut layer = vec![AlternatingWord::empty()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &layer {
            for f in 0..2 {
                if w.letters().last().is_some_and(|(g, _)| *g == f) {
                    continue;
                }
                for label in &labels {
                    let mut letters = w.letters().to_vec();
                    letters.push((f, label.clone()));
                    next.push(AlternatingWord::new(&rings, letters).map_err(err)?);
                }
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }

    let mut dims = HashMap::new();
    let mut dim = |w: &AlternatingWord<Word>| -> BigInt {
        dims.entry(w.clone()).or_insert_with(|| alternating_dimension(&rings, w).unwrap()).clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pick = |rng: &mut ChaCha8Rng| words[rng.random_range(0..words.len())].clone();
    for _ in 0..3000 {
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        let prod = free_product_fusion(&rings, &x, &y).map_err(err)?;
        let total = prod.iter().fold(BigInt::from(0), |acc, (w, m)| acc + dim(w) * BigInt::from(m));
        ensure!(total == dim(&x) * dim(&y), "dimension not multiplicative at {x:?} {y:?}");
    }
    for _ in 0..1000 {
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let mut left = Combination::new();
        for (xy, m) in free_product_fusion(&rings, &x, &y).map_err(err)?.iter() {
            left.add_all(&free_product_fusion(&rings, xy, &z).map_err(err)?, m);
        }
        let mut right = Combination::new();
        for (yz, m) in free_product_fusion(&rings, &y, &z).map_err(err)?.iter() {
            right.add_all(&free_product_fusion(&rings, &x, yz).map_err(err)?, m);
        }
        ensure!(left == right, "associativity fails at {x:?} {y:?} {z:?}");
    }

    // One factor: the free product is the factor itself.
    let single = &rings[..1];
    let plain_words = words_up_to(&z2.elements().unwrap(), 3);
    let lift = |w: &Word| {
        if w.is_empty() {
            AlternatingWord::empty()
        } else {
            AlternatingWord::new(single, vec![(0, w.clone())]).unwrap()
        }
    };
    for x in &plain_words {
        for y in &plain_words {
            let direct = fusion_product(&z2, x, y).map_err(err)?;
            let mut lifted = Combination::new();
            for (w, m) in direct.iter() {
                lifted.add(lift(w), m);
            }
            ensure!(
                free_product_fusion(single, &lift(x), &lift(y)).map_err(err)? == lifted,
                "single factor differs at {x:?} {y:?}"
            );
        }
    }
    Ok(format!(
        "{} alternating words; 3000 dimension pairs, 1000 associativity triples, single factor exact",
        words.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "Catalan moments", ac1),
        ("AC2", "worked composition", ac2),
        ("AC3", "cycle relation", ac3),
        ("AC4", "map functoriality", ac4),
        ("AC5", "multiplication map", ac5),
        ("AC6", "linear independence", ac6),
        ("AC7", "delta-form bookkeeping", ac7),
        ("AC8", "fusion ring", ac8),
        ("AC9", "cross-module consistency", ac9),
        ("AC10", "free product fusion", ac10),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id:<4} PASS {title} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id:<4} FAIL {title} ({secs:.2}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
