//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use houghton::bfs::word_length_exact;
use houghton::fsym::involution::{commuting_involution_core, find_squares, xi_chi};
use houghton::growth::theorem_expectation;
use houghton::mono::{build_tree, mono_profile, mono_profile_ordered, DEFAULT_MAX_LEVEL};
use houghton::{
    element_to_word, growth_report, point_of, AbelianizationMatrix, EndoConfig, Endomorphism,
    EventualTranslation, FinitePermutation, GeneratorImages, GrowthOptions, Point, Word,
    check_presentation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn pt(r: usize, p: i64) -> Point {
    Point::new(r, p)
}

fn b(m: i64) -> Point {
    point_of(2, m).unwrap()
}

fn gen(n: usize, i: usize) -> EventualTranslation {
    EventualTranslation::generator(n, i).unwrap()
}

fn worked() -> Endomorphism {
    let path = format!("{}/../../configs/worked_example.json", env!("CARGO_MANIFEST_DIR"));
    EndoConfig::parse(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .build()
        .unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion_1() -> Outcome {
    let mut checks = 0u64;
    for n in 3..=5 {
        check_presentation(&GeneratorImages::standard(n).map_err(|e| e.to_string())?, 20)
            .map_err(|e| format!("H_{n}: {e}"))?;
        let a = EventualTranslation::alpha(n);
        for i in 2..=n {
            for j in 2..=n {
                if i == j {
                    continue;
                }
                let (gi, gj) = (gen(n, i), gen(n, j));
                for k in 1..=10 {
                    let x = a.conjugate(&gi.pow(k + 1)).unwrap();
                    ensure!(x.commutator(&gj).unwrap().is_identity(), "r6 fails: n={n} i={i} j={j} k={k}");
                    ensure!(
                        a.conjugate(&gi.pow(-k)).unwrap() == a.conjugate(&gj.pow(-k)).unwrap(),
                        "r7 fails: n={n} i={i} j={j} k={k}"
                    );
                    ensure!(a.commutator(&x).unwrap().is_identity(), "r8 fails: n={n} i={i} k={k}");
                    checks += 3;
                }
            }
        }
    }
    Ok(format!("{checks} identity checks"))
}

/// Tree export built from labels listed level by level.
fn export(levels: &[Vec<Point>]) -> String {
    let mut out = String::new();
    for (k, lv) in levels.iter().enumerate() {
        for (j, p) in lv.iter().enumerate() {
            let omega: String = if k == 0 {
                "-".into()
            } else {
                (0..k).rev().map(|s| if (j >> s) & 1 == 0 { '1' } else { '2' }).collect()
            };
            out.push_str(&format!("{k} {omega} label={p}\n"));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let phi = worked();
    let want = FinitePermutation::parse_cycles(3, "((2,1)(1,4))((1,2)(1,3))").unwrap();
    ensure!(
        phi.alpha_image().to_fsym().ok().as_ref() == Some(&want),
        "φ(α) = {}",
        phi.alpha_image()
    );
    let prof = mono_profile_ordered(&phi, Some(&[pt(2, 1), pt(1, 2)])).map_err(|e| e.to_string())?;
    ensure!(prof.ell == 2, "ℓ = {}", prof.ell);
    let mut d = prof.diverging.clone();
    d.sort();
    ensure!(d == vec![pt(1, 2), pt(2, 1)], "D = {:?}", prof.diverging);
    ensure!(mono_profile(&phi).map(|p| p.ell == 2).unwrap_or(false), "default order profile");

    // [m] for m in -6..=6 as listed
    type Listing = fn(i64) -> Point;
    let listings: [(usize, usize, Listing); 4] = [
        (1, 2, |m| if m < 0 { pt(1, -2 * m + 2) } else if m == 0 { pt(2, 1) } else { pt(2, 2 * m + 1) }),
        (2, 2, |m| match m {
            m if m < 0 => pt(1, -2 * m + 1),
            0 => pt(1, 2),
            1 => pt(1, 1),
            m => pt(2, 2 * m - 2),
        }),
        (1, 3, |m| if m < 0 { pt(1, -2 * m + 2) } else if m == 0 { pt(2, 1) } else { pt(3, 2 * m) }),
        (2, 3, |m| if m < 0 { pt(1, -2 * m + 1) } else if m == 0 { pt(1, 2) } else { pt(3, 2 * m - 1) }),
    ];
    for (l, i, f) in listings {
        let p = prof.partial(l, i);
        for m in -6..=6 {
            ensure!(p.point(m) == f(m), "pt_{{{l},{i}}}[{m}] = {} not {}", p.point(m), f(m));
        }
    }

    let figures: [(Point, Vec<Vec<Point>>); 3] = [
        (
            pt(1, 1),
            vec![
                vec![b(0)],
                vec![b(1), b(-1)],
                vec![b(3), b(0), b(-3), b(-2)],
                [7, 4, 1, -1, -7, -6, -5, -4].iter().map(|&m| b(m)).collect(),
            ],
        ),
        (
            pt(1, 2),
            vec![
                vec![b(-1)],
                vec![b(-3), b(-2)],
                vec![b(-7), b(-6), b(-5), b(-4)],
                (9..=16).rev().map(|p| pt(1, p)).collect(),
            ],
        ),
        (
            pt(2, 1),
            vec![
                vec![b(1)],
                vec![b(3), b(0)],
                vec![b(7), b(4), pt(2, 1), pt(1, 2)],
                vec![pt(2, 15), pt(2, 12), pt(2, 9), pt(2, 6), pt(2, 3), pt(1, 1), pt(1, 4), pt(1, 3)],
            ],
        ),
    ];
    let mut labels = 0;
    for (root, levels) in figures {
        let t = build_tree(&prof, root, 3, DEFAULT_MAX_LEVEL).map_err(|e| e.to_string())?;
        ensure!(t.export() == export(&levels), "T_{root} differs:\n{}", t.export());
        labels += levels.iter().map(Vec::len).sum::<usize>();
    }
    Ok(format!("4 orbits on [-6,6], {labels} tree labels bit-exact"))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (name, phi) in [("square", Endomorphism::power_map(3, 2).unwrap()), ("worked", worked())] {
        let r = growth_report(&phi, 10, &GrowthOptions::default()).map_err(|e| e.to_string())?;
        for row in &r.rows {
            if row.lower_root != 2.0 {
                failures.push(format!("{name}: lower_root({}) = {}", row.k, row.lower_root));
            }
        }
        let at10 = r.row(10).unwrap().upper_root;
        let inf = r.rows.iter().map(|x| x.upper_root).fold(f64::INFINITY, f64::min);
        if at10 > 3.0 {
            failures.push(format!("{name}: upper_root(10) = {at10:.4} > 3.0"));
        }
        if (inf - 2.0).abs() > 0.5 {
            failures.push(format!("{name}: inf upper_root = {inf:.4}, not within 0.5 of 2"));
        }
        notes.push(format!("{name}: upper_root(10)={at10:.4} inf={inf:.4}"));
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{} [{}]", failures.join("; "), notes.join("; ")))
    }
}

/// Geodesic words of length at most 3 in `H_3`, one per element.
fn short_conjugators() -> Vec<(Word, usize)> {
    let letters = ["g2", "g2^-1", "g3", "g3^-1"];
    let mut words = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                next.push(format!("{w} {l}").trim().to_string());
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for s in words {
        let w = Word::parse(&s).unwrap();
        let g = w.evaluate(3).unwrap();
        let len = word_length_exact(&g, 6).unwrap().exact().unwrap();
        if len == w.len() && seen.insert(g) {
            out.push((w, len));
        }
    }
    out
}

fn ray_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: Vec<usize>, acc: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(acc);
            return;
        }
        for (j, &x) in rest.iter().enumerate() {
            let mut r = rest.clone();
            r.remove(j);
            let mut a = acc.clone();
            a.push(x);
            go(r, a, out);
        }
    }
    let mut out = Vec::new();
    go((1..=n).collect(), Vec::new(), &mut out);
    out
}

fn criterion_4() -> Outcome {
    let mut cases = Vec::new();
    for (w, len) in short_conjugators() {
        let phi = Endomorphism::inner(&w.evaluate(3).unwrap()).unwrap();
        let opts = GrowthOptions { conjugator: Some(w.clone()), ..GrowthOptions::default() };
        cases.push((format!("inner({w})"), phi, opts, len as u64));
    }
    for n in [3, 4] {
        for sigma in ray_permutations(n) {
            let phi = Endomorphism::ray_permutation(&sigma).unwrap();
            let len = u64::from(sigma[0] != 1);
            cases.push((format!("rays{sigma:?}"), phi, GrowthOptions::default(), len));
        }
    }
    let mut worst: f64 = 0.0;
    for (name, phi, opts, len) in &cases {
        let r = growth_report(phi, 12, opts).map_err(|e| format!("{name}: {e}"))?;
        for row in &r.rows {
            ensure!(
                row.upper <= 1 + 2 * row.k as u64 * len,
                "{name}: upper({}) = {} > 1 + 2k|γ| = {}",
                row.k,
                row.upper,
                1 + 2 * row.k as u64 * len
            );
        }
        let root = r.row(12).unwrap().upper_root;
        ensure!(root <= 1.6, "{name}: upper_root(12) = {root:.4}");
        worst = worst.max(root);
    }
    Ok(format!("{} maps, max upper_root(12) = {worst:.4}", cases.len()))
}

fn criterion_5() -> Outcome {
    let g = Word::parse("g2^2").unwrap().evaluate(3).unwrap();
    let phi = Endomorphism::from_fn(3, |_| Ok(g.clone())).unwrap();
    let a = phi.abelianization_matrix();
    ensure!(a == AbelianizationMatrix::from_rows(vec![vec![2, 2], vec![0, 0]]), "A = {a}");
    let sp = a.spectral_radius();
    ensure!((sp - 2.0).abs() <= 1e-6, "sp = {sp}");
    let (_, expected) = theorem_expectation(&phi).map_err(|e| e.to_string())?;
    ensure!(expected.is_some_and(|e| (e - 2.0).abs() <= 1e-6), "expected {expected:?}");
    let r = growth_report(&phi, 12, &GrowthOptions::default()).map_err(|e| e.to_string())?;
    for row in &r.rows {
        ensure!(row.lower_root == 2.0, "lower_root({}) = {}", row.k, row.lower_root);
    }
    Ok(format!("A = {a}, sp = {sp:.9}, lower_root = 2 for k ≤ 12"))
}

fn involutions(m: i64) -> Vec<FinitePermutation> {
    fn go(free: &[i64], acc: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        let Some((&x, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        go(rest, acc, out);
        for (j, &y) in rest.iter().enumerate() {
            let mut r = rest.to_vec();
            r.remove(j);
            acc.push((x, y));
            go(&r, acc, out);
            acc.pop();
        }
    }
    let pts: Vec<i64> = (1..=m).collect();
    let mut out = Vec::new();
    go(&pts, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|pairs| {
            FinitePermutation::from_pairs(
                3,
                pairs.iter().flat_map(|&(a, c)| [(pt(1, a), pt(1, c)), (pt(1, c), pt(1, a))]),
            )
            .unwrap()
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let all = involutions(12);
    ensure!(all.len() == 140_152, "{} involutions of 12 points", all.len());
    let mut core_pairs = 0u64;
    for t in 0..=6 {
        let beta = FinitePermutation::from_pairs(
            3,
            (0..t).flat_map(|j| {
                let (a, c) = (pt(1, 2 * j + 1), pt(1, 2 * j + 2));
                [(a, c), (c, a)]
            }),
        )
        .unwrap();
        for gamma in &all {
            if beta.compose(gamma).unwrap() != gamma.compose(&beta).unwrap() {
                continue;
            }
            core_pairs += 1;
            let (_, inv) = commuting_involution_core(&beta, gamma).unwrap();
            ensure!(inv, "core not invariant: β={beta} γ={gamma}");
            for sq in find_squares(&beta, gamma).unwrap() {
                ensure!(sq.closes(&beta, gamma), "square fails: β={beta} γ={gamma}");
            }
        }
    }
    ensure!(core_pairs >= 1000, "only {core_pairs} commuting pairs");
    let all = involutions(8);
    let mut order_pairs = 0u64;
    for beta in &all {
        for gamma in &all {
            if !beta.compose(gamma).unwrap().pow(3).is_identity() {
                continue;
            }
            order_pairs += 1;
            let r = xi_chi(beta, gamma).unwrap();
            ensure!(r.cardinalities_ok(), "ξ/χ cardinalities: β={beta} γ={gamma}");
            ensure!(r.pairing_ok(), "S_1/T_1 pairing: β={beta} γ={gamma}");
        }
    }
    Ok(format!("{core_pairs} commuting pairs (12 points), {order_pairs} order-3 pairs (8 points)"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let phi = worked();
    let prof = mono_profile(&phi).map_err(|e| e.to_string())?;
    let mut done = 0;
    while done < 50 {
        let p = pt(rng.gen_range(1..=3), rng.gen_range(1..=10));
        let q = pt(rng.gen_range(1..=3), rng.gen_range(1..=10));
        if p == q {
            continue;
        }
        let tau = EventualTranslation::from_fsym(&FinitePermutation::transposition(3, p, q).unwrap());
        for k in 0..=5u32 {
            let fast = prof.phi_tau_product(p, q, k as usize).map_err(|e| e.to_string())?;
            let slow = prof
                .essential_restriction(&phi.iterate_element(&tau, k).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure!(fast == slow, "P={p} Q={q} k={k}");
        }
        done += 1;
    }
    for s in 0..1000 {
        let n = rng.gen_range(3..=5);
        let mut w = Word::new();
        for _ in 0..rng.gen_range(0..=16) {
            let i = rng.gen_range(2..=n);
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            w.push_pow(houghton::Letter::g(i), e);
        }
        let mut g = w.evaluate(n).unwrap();
        for _ in 0..rng.gen_range(0..=3) {
            let a = pt(rng.gen_range(1..=n), rng.gen_range(1..=8));
            let c = pt(rng.gen_range(1..=n), rng.gen_range(1..=8));
            if a != c {
                let t = FinitePermutation::transposition(n, a, c).unwrap();
                g = g.compose(&EventualTranslation::from_fsym(&t)).unwrap();
            }
        }
        let back = element_to_word(&g).evaluate(n).unwrap();
        ensure!(back == g, "round trip {s} fails on {g}");
    }
    Ok("50 transposition pairs for k ≤ 5, 1000 word round trips".into())
}

fn criterion_8() -> Outcome {
    let mut corpus = vec![
        ("worked", worked()),
        ("identity3", Endomorphism::identity(3).unwrap()),
        ("square3", Endomorphism::power_map(3, 2).unwrap()),
        ("square4", Endomorphism::power_map(4, 2).unwrap()),
        ("square5", Endomorphism::power_map(5, 2).unwrap()),
        ("cube3", Endomorphism::power_map(3, 3).unwrap()),
    ];
    let h = Word::parse("g2 g3^-1").unwrap().evaluate(3).unwrap();
    corpus.push(("inner", Endomorphism::inner(&h).unwrap()));
    corpus.push(("inner∘worked", Endomorphism::inner(&h).unwrap().compose(&worked()).unwrap()));
    let swap = Endomorphism::ray_permutation(&[1, 3, 2]).unwrap();
    corpus.push(("swap∘square", swap.compose(&Endomorphism::power_map(3, 2).unwrap()).unwrap()));
    let cyc = Endomorphism::ray_permutation(&[1, 3, 4, 2]).unwrap();
    corpus.push(("cycle∘square", cyc.compose(&Endomorphism::power_map(4, 2).unwrap()).unwrap()));
    for (name, phi) in &corpus {
        let prof = mono_profile(phi).map_err(|e| format!("{name}: {e}"))?;
        ensure!(prof.is_clean(), "{name}: {:?}", prof.violations);
        let a = phi.abelianization_matrix();
        ensure!(a == prof.delta_matrix().scale(prof.ell), "{name}: A = {a}");
        let ld = prof.ell.pow(prof.d);
        ensure!(ld <= 10_000, "{name}: ℓ^d = {ld}");
        for i in 2..=phi.n() {
            let g = phi.iterate(i, prof.d).map_err(|e| e.to_string())?;
            let mut want = vec![0i64; phi.n()];
            want[0] = -ld;
            want[i - 1] = ld;
            ensure!(g.pi().to_vec() == want, "{name}: π(φ^d(g{i})) = {:?}", g.pi());
        }
    }
    Ok(format!("{} mono-candidates", corpus.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "presentation suite", criterion_1, Duration::from_secs(5)),
        (2, "worked example", criterion_2, Duration::from_secs(5)),
        (3, "growth sandwich, mono", criterion_3, Duration::from_secs(60)),
        (4, "automorphisms", criterion_4, Duration::from_secs(30)),
        (5, "non-mono", criterion_5, Duration::from_secs(10)),
        (6, "involution suites", criterion_6, Duration::from_secs(60)),
        (7, "oracle equivalence", criterion_7, Duration::from_secs(120)),
        (8, "matrix identity", criterion_8, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let over = start.elapsed() > budget;
        let (tag, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over budget {}s: {d}", budget.as_secs())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {id} ({name}): {tag} in {secs:.2}s: {detail}");
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
