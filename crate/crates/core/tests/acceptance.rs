//! Acceptance harness: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on
//! any gating failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperweil::admissibility::{self, ClassTable};
use hyperweil::census::{self, CensusMode, CensusRecord};
use hyperweil::enumerate;
use hyperweil::field::{FiniteField, FqPoly};
use hyperweil::sieve;
use hyperweil::{Parities, Partition, WeilPolyCoeffs};
use num_bigint::BigInt;
use num_rational::Ratio;

type Check = std::result::Result<String, String>;

/// `(id, title, budget in seconds, gates the exit status, check)`.
type Criterion = (&'static str, &'static str, u64, bool, Box<dyn FnOnce() -> Check>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: hyperweil::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn parts(p: &[u32]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

fn ac1() -> Check {
    let sizes: Vec<usize> = (1..=7)
        .map(|g| admissibility::admissible_set(g).map(|s| s.len()))
        .collect::<hyperweil::Result<_>>()
        .map_err(|e| e.to_string())?;
    let bad: Vec<usize> = (1..=7)
        .map(|g| admissibility::inadmissible_parities(g).map(|v| v.len()))
        .collect::<hyperweil::Result<_>>()
        .map_err(|e| e.to_string())?;
    ensure(sizes == [2, 4, 6, 10, 15, 22, 32], || format!("class counts {sizes:?}"))?;
    ensure(bad == [0, 0, 2, 6, 17, 42, 96], || format!("inadmissible counts {bad:?}"))?;
    Ok(format!("Q = {sizes:?}, 2^g - Q = {bad:?}"))
}

fn ac2() -> Check {
    let expected: [(&[u8], Vec<&[u32]>); 6] = [
        (&[0, 1, 1], vec![&[3, 5]]),
        (&[1, 1, 0], vec![&[1, 1, 1, 1, 1, 3], &[1, 1, 1, 2, 3], &[1, 2, 2, 3], &[1, 3, 4]]),
        (&[1, 0, 0], vec![&[1, 1, 1, 5], &[1, 2, 5]]),
        (&[0, 0, 0], vec![&[1, 1, 3, 3], &[1, 1, 6], &[2, 3, 3], &[2, 6]]),
        (
            &[0, 1, 0],
            vec![
                &[1, 1, 1, 1, 1, 1, 1, 1],
                &[1, 1, 1, 1, 1, 1, 2],
                &[1, 1, 1, 1, 2, 2],
                &[1, 1, 1, 1, 4],
                &[1, 1, 2, 2, 2],
                &[1, 1, 2, 4],
                &[2, 2, 2, 2],
                &[2, 2, 4],
                &[4, 4],
                &[8],
            ],
        ),
        (&[1, 1, 1], vec![&[1, 7]]),
    ];
    let table = lib(ClassTable::new(3))?;
    ensure(table.len() == 6, || format!("{} rows", table.len()))?;
    let mut seen = 0;
    for (bits, want) in &expected {
        let parities = Parities::from_slice(bits).unwrap();
        let row = table
            .row_for(&parities)
            .ok_or_else(|| format!("no row for {parities}"))?;
        let got: BTreeSet<Partition> = row.partitions.iter().cloned().collect();
        let want: BTreeSet<Partition> = want.iter().map(|p| parts(p)).collect();
        ensure(got == want, || format!("row {parities}: {got:?}"))?;
        seen += got.len();
    }
    ensure(seen == 22, || format!("{seen} partitions placed"))?;
    Ok("22 partitions in 6 rows as tabulated".into())
}

fn ac3() -> Check {
    let bad: BTreeSet<Vec<u8>> = lib(admissibility::inadmissible_parities(3))?
        .iter()
        .map(Parities::to_vec)
        .collect();
    let want: BTreeSet<Vec<u8>> = [vec![0, 0, 1], vec![1, 0, 1]].into();
    ensure(bad == want, || format!("inadmissible {bad:?}"))?;
    for p in Parities::all(3) {
        let admissible = admissibility::is_admissible(&p).is_some();
        ensure(admissible != want.contains(&p.to_vec()), || format!("verdict for {p}"))?;
    }
    Ok("inadmissible exactly (0, 0, 1) and (1, 0, 1)".into())
}

fn ac4() -> Check {
    let mut sizes = Vec::new();
    for g in 3..=5 {
        let cv = lib(sieve::cross_validate(g))?;
        ensure(cv.agrees(), || format!("g = {g}: symmetric difference {:?}", cv.symmetric_difference))?;
        sizes.push(cv.inadmissible.len());
    }
    Ok(format!("empty symmetric difference for g = 3, 4, 5 ({sizes:?} classes)"))
}

fn ac5() -> Check {
    let mut got = Vec::new();
    for (q, want) in [(2u64, 215u64), (3, 677), (5, 2953)] {
        let start = Instant::now();
        let n = lib(enumerate::count_isogeny_classes(3, q))?;
        ensure(n == want, || format!("q = {q}: {n} != {want}"))?;
        ensure(start.elapsed() < Duration::from_secs(30), || format!("q = {q} took {:?}", start.elapsed()))?;
        got.push(n);
    }
    Ok(format!("{got:?}"))
}

fn ac6() -> Check {
    let mut rows = Vec::new();
    for (g, q, total, bad, pct) in [
        (4usize, 3u64, 10963u64, 3856u64, "35.17"),
        (3, 17, 112283, 27974, "24.91"),
        (5, 3, 267465, 137866, "51.55"),
    ] {
        let r = lib(enumerate::proportion_report(g, q))?;
        let got_pct = format!("{:.2}", r.inadmissible_percent());
        ensure((r.total, r.inadmissible) == (total, bad) && got_pct == pct, || {
            format!("({g}, {q}): {} / {} / {got_pct}%", r.total, r.inadmissible)
        })?;
        rows.push(format!("({g},{q}) {total}/{bad}/{pct}%"));
    }
    Ok(rows.join(", "))
}

fn ac7() -> Check {
    let runs = [(1usize, 3u64), (1, 5), (2, 3), (2, 5), (3, 3), (3, 5)];
    let mut total = 0;
    for (g, q) in runs {
        let s = lib(census::run_and_verify(g, q, CensusMode::Exhaustive))?;
        ensure(s.violations == 0, || format!("({g}, {q}): {:?}", s.violation_log))?;
        ensure(s.all_classes_admissible(), || format!("({g}, {q}): inadmissible class realized"))?;
        total += s.records;
    }
    Ok(format!("{total} curves including (3, 5), 0 violations"))
}

fn ac8() -> Check {
    let s = lib(census::run_and_verify(3, 3, CensusMode::Exhaustive))?;
    ensure(!s.realized(&parts(&[1; 8])), || "all-ones partition realized over F_3".into())?;
    let s = lib(census::run_and_verify(3, 11, CensusMode::Sample { count: 100_000, seed: 2024 }))?;
    ensure(s.violations == 0, || format!("{:?}", s.violation_log))?;
    let admissible = s.realized_classes.iter().filter(|c| c.admissible).count();
    ensure(admissible == 6, || format!("{admissible} admissible classes realized"))?;
    Ok("{1^8} absent over F_3; 6 of 6 classes in 10^5 curves over F_11".into())
}

fn ac9() -> Check {
    let limit = admissibility::limit_proportion(3);
    ensure(limit == Ratio::new(3, 4), || format!("limit {limit}"))?;
    Ok(format!("Q(8)/2^3 = {limit}"))
}

/// Inadmissible share at g = 3 should rise toward 25% with at most one local
/// inversion across the listed fields. Reported, not gating.
fn ac9_trend() -> Check {
    let pcts: Vec<f64> = [3u64, 5, 7, 9, 11, 13, 17]
        .iter()
        .map(|&q| enumerate::proportion_report(3, q).map(|r| r.inadmissible_percent()))
        .collect::<hyperweil::Result<_>>()
        .map_err(|e| e.to_string())?;
    let inversions = pcts.windows(2).filter(|w| w[1] < w[0]).count();
    let shown: Vec<String> = pcts.iter().map(|p| format!("{p:.2}")).collect();
    ensure(inversions <= 1 && pcts.iter().all(|&p| p < 25.0), || {
        format!("{inversions} local inversions in {shown:?} for q = 3, 5, 7, 9, 11, 13, 17")
    })?;
    Ok(format!("inadmissible % {shown:?}"))
}

/// Coefficient-box scan filtered by the closed-form genus 1 and 2 regions.
fn box_oracle(g: usize, q: u64) -> Vec<Vec<i64>> {
    let q_ = q as i128;
    let mut out = Vec::new();
    if g == 1 {
        let b = (2.0 * (q as f64).sqrt()) as i64 + 1;
        for a1 in -b..=b {
            if (a1 as i128).pow(2) <= 4 * q_ {
                out.push(vec![a1]);
            }
        }
    } else {
        let b1 = (4.0 * (q as f64).sqrt()) as i64 + 1;
        let b2 = 6 * q as i64;
        for a1 in -b1..=b1 {
            for a2 in -b2..=b2 {
                let (x, y) = (a1 as i128, a2 as i128);
                let upper = 4 * y <= x * x + 8 * q_;
                let lower = y + 2 * q_ >= 0 && 4 * x * x * q_ <= (y + 2 * q_).pow(2);
                if x * x <= 16 * q_ && upper && lower {
                    out.push(vec![a1, a2]);
                }
            }
        }
    }
    out
}

/// `#{(x, y) : y^2 = f(x)}` over `F_{q^n}` plus the points at infinity.
fn brute_count(fq: &FiniteField, f: &[u32], n: u32) -> u64 {
    let k = FiniteField::build_extension(fq.characteristic() as u64, fq.degree() * n).unwrap();
    let emb = k.embedding_of(fq).unwrap();
    let fe = FqPoly::new(f.iter().map(|&c| emb[c as usize]).collect());
    let mut squares = vec![0u64; k.order() as usize];
    for y in k.elements() {
        squares[k.mul(y, y) as usize] += 1;
    }
    let affine: u64 = k.elements().map(|x| squares[fe.eval(&k, x) as usize]).sum();
    let lead = emb[*f.last().unwrap() as usize];
    let infinity = if f.len() % 2 == 0 { 1 } else if squares[lead as usize] > 0 { 2 } else { 0 };
    affine + infinity
}

fn ac10() -> Check {
    for g in 1..=2 {
        for q in [2u64, 3, 4, 5] {
            let got: Vec<Vec<i64>> = lib(enumerate::enumerate(g, q))?.into_iter().map(|w| w.a).collect();
            let want = box_oracle(g, q);
            ensure(got == want, || format!("g = {g}, q = {q}: {} vs {}", got.len(), want.len()))?;
        }
    }
    let mut checked = 0;
    for (g, q) in [(1usize, 3u64), (1, 5), (2, 3)] {
        let fq = FiniteField::build_extension(q, 1).unwrap();
        let records: Vec<CensusRecord> = lib(census::census(g, q, CensusMode::Exhaustive))?;
        for r in &records {
            let from_weil = r.weil.point_counts(r.counts.len());
            for (i, &c) in r.counts.iter().enumerate() {
                ensure(from_weil.get(i + 1) == &BigInt::from(c), || format!("record {} n = {}", r.id, i + 1))?;
            }
            for n in 1..=2u32 {
                let direct = brute_count(&fq, &r.f, n);
                ensure(direct == r.counts[n as usize - 1], || format!("record {} brute n = {n}", r.id))?;
            }
            let back = lib(WeilPolyCoeffs::from_point_counts(
                q,
                g,
                &r.counts[..g].iter().map(|&c| c.into()).collect::<Vec<_>>(),
            ))?;
            ensure(back == r.weil, || format!("record {} Newton inversion", r.id))?;
            checked += 1;
        }
    }
    Ok(format!("box oracle for g <= 2, q <= 5; {checked} census records against direct counts"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("AC-1", "admissible class counts g = 1..7", 1, true, Box::new(ac1)),
        ("AC-2", "genus 3 partition table", 1, true, Box::new(ac2)),
        ("AC-3", "genus 3 inadmissible parities", 1, true, Box::new(ac3)),
        ("AC-4", "sieve agrees with admissibility, g = 3..5", 600, true, Box::new(ac4)),
        ("AC-5", "isogeny class totals, g = 3", 90, true, Box::new(ac5)),
        ("AC-6", "proportion reports", 600, true, Box::new(ac6)),
        ("AC-7", "exhaustive census laws", 600, true, Box::new(ac7)),
        ("AC-8", "small-field realizability", 300, true, Box::new(ac8)),
        ("AC-9", "limit value at g = 3", 1, true, Box::new(ac9)),
        ("AC-9t", "genus 3 trend (informational)", 60, false, Box::new(ac9_trend)),
        ("AC-10", "oracle equivalence", 60, true, Box::new(ac10)),
    ];
    let mut failed = 0;
    let mut informational = 0;
    for (id, title, budget, gating, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(budget);
        let (tag, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the {budget}s budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            if gating {
                failed += 1;
            } else {
                informational += 1;
            }
        }
        println!("[{tag}] {id:<5} {title} ({:.2}s): {detail}", elapsed.as_secs_f64());
    }
    if informational > 0 {
        println!("{informational} informational checks failed (not gating)");
    }
    if failed == 0 {
        println!("all gating criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
