//! End-to-end acceptance checks. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr so it shows up even when output is captured.

use std::collections::HashSet;
use std::io::Write;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use laminar_core::lamination::count_linked_pairs;
use laminar_core::quad::linked_pair_violation;
use laminar_core::tags::cocritical_of;
use laminar_core::{
    check_sibling_invariant, classify_pair, enumerate_with, family_disjoint_or_equal, lavaurs_qml,
    linked, pullback_generate, strongly_linked, usc_probe, Angle, Chord, CriticalPortrait,
    CriticalQuadrilateral, EnumerateOptions, MarkedLamination, PairClass, Polygon,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, detail: impl AsRef<str>) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    writeln!(err, "criterion {n}: {verdict} ({})", detail.as_ref()).unwrap();
}

struct Corpus {
    members: Vec<(CriticalPortrait, MarkedLamination)>,
    elapsed: Duration,
}

/// Shared by criteria 1, 2, 5 and 7: preperiod and period at most 3, depth 8.
fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let opts = EnumerateOptions {
            max_preperiod: 3,
            max_period: 3,
            count: 100,
            depth: 8,
            seed: 0,
        };
        let members = enumerate_with(&opts).accepted;
        Corpus {
            members,
            elapsed: start.elapsed(),
        }
    })
}

#[test]
fn criterion_1_mixed_tags_disjoint_or_equal() {
    let c = corpus();
    let start = Instant::now();
    let family: Vec<MarkedLamination> = c.members.iter().map(|(_, m)| m.clone()).collect();
    let mut distinct = 0;
    for (i, m) in family.iter().enumerate() {
        if family[..i].iter().all(|o| o != m) {
            distinct += 1;
        }
    }
    let r = family_disjoint_or_equal(&family).unwrap();
    let total = c.elapsed + start.elapsed();
    let pairs = r.disjoint + r.equal + r.overlap;
    let ok =
        distinct >= 100 && pairs >= 4950 && r.overlap == 0 && total <= Duration::from_secs(300);
    report(
        1,
        ok,
        format!(
            "{distinct} distinct, {pairs} pairs, disjoint={} equal={} overlap={}, {:.1}s",
            r.disjoint,
            r.equal,
            r.overlap,
            total.as_secs_f64()
        ),
    );
    for (i, j, rel) in r.overlaps() {
        eprintln!(
            "overlap {i} {j}: {rel}\n{}\n{}",
            c.members[*i].0.dump(),
            c.members[*j].0.dump()
        );
    }
    assert!(ok);
}

#[test]
fn criterion_2_linked_pairs_agree() {
    let c = corpus();
    let mut classified = [0usize; 3];
    let mut violations = Vec::new();
    for (i, (_, m1)) in c.members.iter().enumerate() {
        for (j, (_, m2)) in c.members.iter().enumerate() {
            let class = classify_pair(m1, m2);
            classified[class as usize] += 1;
            if class != PairClass::Unrelated {
                if let Some(v) = linked_pair_violation(m1, m2) {
                    violations.push(format!("{i} {j} {class:?}: {v}"));
                }
            }
        }
    }
    let ok = violations.is_empty()
        && classified[PairClass::EssentiallyEqual as usize] >= c.members.len();
    report(
        2,
        ok,
        format!(
            "linked={} essentially_equal={} unrelated={}, {} violations",
            classified[PairClass::Linked as usize],
            classified[PairClass::EssentiallyEqual as usize],
            classified[PairClass::Unrelated as usize],
            violations.len()
        ),
    );
    assert!(ok, "{violations:#?}");
}

#[test]
fn criterion_3_lavaurs_minors_unlinked() {
    let start = Instant::now();
    let l = lavaurs_qml(8).unwrap();
    let chords: Vec<Chord> = l.leaves().cloned().collect();
    let crossings = count_linked_pairs(&chords);
    let t = start.elapsed();
    // every angle of exact period 2..=8 under doubling is used once
    let expected: usize = (2..=8u32).map(|k| exact_period_count(k) / 2).sum();
    let ok = crossings == 0 && chords.len() == expected && t <= Duration::from_secs(10);
    report(
        3,
        ok,
        format!(
            "{} minors, {crossings} linked pairs, {:.2}s",
            chords.len(),
            t.as_secs_f64()
        ),
    );
    assert!(ok);
}

/// Möbius inversion over divisors of `k`: points of exact period `k`.
fn exact_period_count(k: u32) -> usize {
    fn mobius(mut n: u32) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            -m
        } else {
            m
        }
    }
    (1..=k)
        .filter(|e| k.is_multiple_of(*e))
        .map(|e| mobius(k / e) * (1i64 << e))
        .sum::<i64>() as usize
}

/// Rejection-samples a critical quadrilateral from `{x, x+s, y, y+t}`,
/// `s, t` in thirds, with `x, y` multiples of `1/den`.
fn random_quad(rng: &mut ChaCha8Rng, den: i64) -> CriticalQuadrilateral {
    loop {
        let x = Angle::frac(rng.gen_range(0..den), den);
        let y = Angle::frac(rng.gen_range(0..den), den);
        if let Some(q) = quad_from(&x, &y, rng.gen_range(1..3), rng.gen_range(1..3)) {
            return q;
        }
    }
}

fn quad_from(x: &Angle, y: &Angle, s: i64, t: i64) -> Option<CriticalQuadrilateral> {
    let mut v = vec![
        x.clone(),
        x + &Angle::frac(s, 3),
        y.clone(),
        y + &Angle::frac(t, 3),
    ];
    v.sort();
    CriticalQuadrilateral::new(3, v.try_into().unwrap()).ok()
}

#[test]
fn criterion_4_cocritical_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (third, two_thirds) = (Angle::frac(1, 3), Angle::frac(2, 3));
    let third_q = BigRational::new(1.into(), 3.into());
    let mut tested = 0;
    let mut failures = Vec::new();
    while tested < 1000 {
        let den = rng.gen_range(2..=10_000 / 3) * 3;
        let q = random_quad(&mut rng, den);
        if !q.is_collapsing() {
            continue;
        }
        let c = q.hull();
        if !c.holes().iter().any(|h| h.length > third_q) {
            continue;
        }
        tested += 1;
        let co = cocritical_of(&c).unwrap();
        let rebuilt = Polygon::from_points(
            co.vertices()
                .iter()
                .flat_map(|v| [v + &third, v + &two_thirds]),
        );
        if rebuilt != c {
            failures.push(format!("{q}: co={co} rebuilt={rebuilt}"));
        }
    }
    let ok = failures.is_empty();
    report(
        4,
        ok,
        format!(
            "{tested} collapsing quadrilaterals, {} failures",
            failures.len()
        ),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_5_generator_soundness() {
    let c = corpus();
    let mut failures = Vec::new();
    let mut tested = 0;
    for (i, (p, m)) in c.members.iter().enumerate() {
        let r = check_sibling_invariant(m.lamination());
        tested += r.tested;
        if !r.passed() {
            failures.push(format!("{i}: {:?}\n{}", r.failures.first(), p.dump()));
        }
    }
    let ok = failures.is_empty() && !c.members.is_empty();
    report(
        5,
        ok,
        format!(
            "{} laminations, {tested} leaves tested, {} failures",
            c.members.len(),
            failures.len()
        ),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_6_strong_linkage_is_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sequences = 0;
    let mut draws = 0;
    let mut failures = Vec::new();
    while sequences < 1000 {
        draws += 1;
        assert!(
            draws < 2_000_000,
            "only {sequences} strongly linked sequences found"
        );
        // limits on a coarse grid so that coincidences are common
        let den = 3 << rng.gen_range(1..=10);
        let (xa, ya) = (rng.gen_range(0..den), rng.gen_range(0..den));
        let (xb, yb) = match rng.gen_range(0..3) {
            0 => (rng.gen_range(0..den), rng.gen_range(0..den)),
            1 => (xa, rng.gen_range(0..den)),
            _ => (ya, rng.gen_range(0..den)),
        };
        let s: [i64; 4] = std::array::from_fn(|_| rng.gen_range(1..3));
        let params = [xa, ya, xb, yb];
        let limit =
            |off: [i64; 4], fine: i64| -> Option<(CriticalQuadrilateral, CriticalQuadrilateral)> {
                let pt = |i: usize| Angle::frac(params[i] * (fine / den) + off[i], fine);
                Some((
                    quad_from(&pt(0), &pt(1), s[0], s[1])?,
                    quad_from(&pt(2), &pt(3), s[2], s[3])?,
                ))
            };
        let Some((a, b)) = limit([0; 4], den) else {
            continue;
        };
        let dirs: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-1..=1));
        // terms approach the limit along fixed directions; finest grid is 3 * 2^18
        let mut all_linked = true;
        for n in 11..=18 {
            let fine = 3 << n;
            match limit(dirs, fine) {
                Some((an, bn)) if strongly_linked(&an, &bn) => {}
                _ => {
                    all_linked = false;
                    break;
                }
            }
        }
        if !all_linked {
            continue;
        }
        sequences += 1;
        if !strongly_linked(&a, &b) {
            failures.push(format!("{a} {b} along {dirs:?}"));
        }
    }
    let ok = failures.is_empty();
    report(
        6,
        ok,
        format!(
            "{sequences} sequences from {draws} draws, {} failures",
            failures.len()
        ),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_7_usc_probe() {
    let c = corpus();
    let mut sequences = 0;
    let mut failures = Vec::new();
    let mut used = HashSet::new();
    for (p, m) in &c.members {
        if sequences >= 20 {
            break;
        }
        let mut key = p.criticals().to_vec();
        key.sort();
        if !used.insert(key) {
            continue;
        }
        let Some(seq) = p
            .criticals()
            .iter()
            .enumerate()
            .find_map(|(slot, critical)| {
                let hull = critical.hull();
                if hull.len() != 2 {
                    return None;
                }
                let coord = [m.c1(), m.c2()].iter().position(|c| **c == hull)?;
                hull.vertices()
                    .iter()
                    .filter(|t| hull.contains_vertex(&(*t + &Angle::frac(1, 3))))
                    .find_map(|t| {
                        shrinking_sequence(p, m, [slot, coord], t)
                            .map_err(|e| eprintln!("DBG {t}: {e}"))
                            .ok()
                    })
            })
        else {
            continue;
        };
        sequences += 1;
        match usc_probe(&seq, m) {
            Ok(true) => {}
            other => failures.push(format!("{p:?}: {other:?}")),
        }
    }
    let ok = sequences == 20 && failures.is_empty();
    report(
        7,
        ok,
        format!("{sequences} sequences, {} failures", failures.len()),
    );
    assert!(ok, "{failures:#?}");
}

/// Critical quadrilaterals shrinking onto the leaf `{t, t+1/3}`.
///
/// With `v = σ(t)` landing after `j` steps on the point `p` of period `m`, a
/// limit leaf `{a, b}` near `p` is pulled back `k` times along the branch
/// fixing `p`, then `j + 1` more times along the branch through `t`. Both
/// branches are affine, so the vertices `t + (a - p) / 3^(j+1+mk)` converge
/// geometrically and have denominators of the form `3ⁿ(3ᵐ-1)`.
fn shrinking_sequence(
    p: &CriticalPortrait,
    limit: &MarkedLamination,
    [slot, coord]: [usize; 2],
    t: &Angle,
) -> Result<Vec<MarkedLamination>, String> {
    let third = Angle::frac(1, 3);
    let v = t.sigma(3).unwrap();
    let (j, m) = v.orbit_type(3);
    let periodic = v.orbit(3)[j].clone();
    let offset = |a: &Angle| {
        let x = periodic.ccw_to(a).to_f64();
        if x > 0.5 {
            x - 1.0
        } else {
            x
        }
    };
    let mut near: Vec<&Chord> = limit
        .lamination()
        .leaves()
        .filter(|c| !c.has_endpoint(&periodic))
        .collect();
    near.sort_by(|c, d| {
        let size = |c: &Chord| offset(c.a()).abs().max(offset(c.b()).abs());
        size(c).total_cmp(&size(d))
    });
    // t moved by the signed offset of `a` from the periodic point, scaled down
    let toward = |a: &Angle, scale: &BigUint| {
        let up = periodic.ccw_to(a);
        if offset(a) >= 0.0 {
            t + &Angle::new(
                BigInt::from(up.numerator().clone()),
                BigInt::from(up.denominator() * scale),
            )
        } else {
            let down = a.ccw_to(&periodic);
            t - &Angle::new(
                BigInt::from(down.numerator().clone()),
                BigInt::from(down.denominator() * scale),
            )
        }
    };
    let mut last = String::from("no leaf near the periodic point");
    for leaf in near.into_iter().take(40) {
        let attempt = (|| {
            let mut out = Vec::new();
            for k in 1..=5u32 {
                let scale = BigUint::from(3u32).pow(j as u32 + 1 + m as u32 * k);
                let (x, y) = (toward(leaf.a(), &scale), toward(leaf.b(), &scale));
                let mut verts = [x.clone(), y.clone(), &x + &third, &y + &third];
                verts.sort();
                let q = CriticalQuadrilateral::new(3, verts).map_err(|e| e.to_string())?;
                let mut criticals = p.criticals().to_vec();
                criticals[slot] = q.clone();
                let portrait = CriticalPortrait::new(3, criticals).map_err(|e| e.to_string())?;
                let l = Arc::new(pullback_generate(&portrait, 3).map_err(|e| e.to_string())?);
                let mut pattern = [limit.c1().clone(), limit.c2().clone()];
                pattern[coord] = q.hull();
                let [c1, c2] = pattern;
                out.push(MarkedLamination::new(l, c1, c2).map_err(|e| e.to_string())?);
            }
            Ok::<_, String>(out)
        })();
        match attempt {
            Ok(out) => return Ok(out),
            Err(e) => last = format!("{leaf:?}: {e}"),
        }
    }
    Err(last)
}

#[test]
fn criterion_8_linked_matches_float_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let point = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(1..=1000);
        Angle::frac(rng.gen_range(0..q), q)
    };
    let mut disagreements = Vec::new();
    let mut linked_count = 0;
    let mut seen = HashSet::new();
    for _ in 0..100_000 {
        let c1 = loop {
            let c = Chord::new(point(&mut rng), point(&mut rng));
            if !c.is_degenerate() {
                break c;
            }
        };
        let c2 = loop {
            // every tenth pair shares an endpoint
            let a = if rng.gen_ratio(1, 10) {
                c1.a().clone()
            } else {
                point(&mut rng)
            };
            let c = Chord::new(a, point(&mut rng));
            if !c.is_degenerate() && c != c1 {
                break c;
            }
        };
        let exact = linked(&c1, &c2);
        linked_count += exact as usize;
        if exact != segments_cross(&c1, &c2) {
            disagreements.push(format!("{c1:?} {c2:?} exact={exact}"));
        }
        seen.insert((c1, c2));
    }
    let ok = disagreements.is_empty();
    report(
        8,
        ok,
        format!(
            "{} distinct pairs, {linked_count} linked, {} disagreements",
            seen.len(),
            disagreements.len()
        ),
    );
    assert!(ok, "{disagreements:#?}");
}

/// Proper crossing of the two straight segments in the plane, with
/// orientations inside 1e-9 of zero counted as touching.
fn segments_cross(c1: &Chord, c2: &Chord) -> bool {
    let pt = |a: &Angle| {
        let x = a.to_f64() * std::f64::consts::TAU;
        (x.cos(), x.sin())
    };
    let (p1, p2, p3, p4) = (pt(c1.a()), pt(c1.b()), pt(c2.a()), pt(c2.b()));
    let orient = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        let o = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        if o.abs() < 1e-9 {
            0.0
        } else {
            o.signum()
        }
    };
    orient(p1, p2, p3) * orient(p1, p2, p4) < 0.0 && orient(p3, p4, p1) * orient(p3, p4, p2) < 0.0
}
