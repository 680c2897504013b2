//! Self-verification: replays the library's claims against the brute-force
//! oracle and reports one line per suite.

use slimcount::count::{max_inversions, CountEngine, TableKind};
use slimcount::lattice::{build_lattice, build_quotient, quotient_size_formula, source_cells};
use slimcount::oracle::{
    brute_census, brute_count_ssd, brute_count_ssl, count_321_avoiders, enumerate_permutations,
    lattices_isomorphic, DEFAULT_DEGREE_LIMIT, DEFAULT_SIZE_LIMIT,
};
use slimcount::perm::PartialPermutation;
use slimcount::{count_distributive_diagrams, Nat};

use crate::CmdError;

pub fn cmd_verify(max_h: usize, max_n: usize, deep: bool) -> Result<(), CmdError> {
    if max_h > DEFAULT_DEGREE_LIMIT {
        return Err(CmdError::Usage(format!(
            "--max-h {max_h} exceeds the enumeration limit {DEFAULT_DEGREE_LIMIT}"
        )));
    }
    if max_n > DEFAULT_SIZE_LIMIT {
        return Err(CmdError::Usage(format!(
            "--max-n {max_n} exceeds the brute-force limit {DEFAULT_SIZE_LIMIT}"
        )));
    }
    let mut suites: Vec<(&str, Result<String, String>)> = vec![
        ("tables-vs-census", tables_vs_census(max_h)),
        ("ssl-vs-brute", ssl_vs_brute(max_n)),
        ("ssd-vs-brute", ssd_vs_brute(max_n)),
        ("quotient-formula", quotient_formula()),
        ("lattice-properties", lattice_properties(max_h.min(6))),
        ("catalan-avoiders", catalan_avoiders(max_h.min(8))),
    ];
    if deep {
        suites.push(("iso-vs-block", iso_vs_block(max_h.min(4))));
    }
    let mut failed = false;
    for (name, outcome) in suites {
        match outcome {
            Ok(summary) => println!("ok   {name:<20} {summary}"),
            Err(detail) => {
                failed = true;
                println!("FAIL {name:<20} {detail}");
            }
        }
    }
    if failed {
        Err(CmdError::VerifyFailed)
    } else {
        println!("all suites passed");
        Ok(())
    }
}

fn tables_vs_census(max_h: usize) -> Result<String, String> {
    let mut engine = CountEngine::<Nat>::new();
    engine
        .ensure(TableKind::Blocks, max_h, max_inversions(max_h))
        .map_err(|e| e.to_string())?;
    let mut cells = 0usize;
    for h in 0..=max_h {
        let census = brute_census(h).map_err(|e| e.to_string())?;
        for (k, row) in census.per_k.iter().enumerate() {
            let pairs = [
                (TableKind::Permutations, row.p),
                (TableKind::Irreducibles, row.i),
                (TableKind::Involutions, row.t),
                (TableKind::IrreducibleInvolutions, row.it),
                (TableKind::Blocks, row.b),
            ];
            for (kind, brute) in pairs {
                let table = engine.table(kind).expect("ensured above");
                let computed = table.get(h, k).map_err(|e| e.to_string())?;
                if computed != Nat::from(brute) {
                    return Err(format!(
                        "{kind}({h}, {k}) = {computed} but the census found {brute}"
                    ));
                }
                cells += 1;
            }
        }
    }
    Ok(format!("h<={max_h}: {cells} cells agree with the census"))
}

fn ssl_vs_brute(max_n: usize) -> Result<String, String> {
    let mut engine = CountEngine::<Nat>::new();
    for n in 1..=max_n {
        let computed = engine.count_ssl(n).map_err(|e| e.to_string())?;
        let brute = brute_count_ssl(n).map_err(|e| e.to_string())?;
        if computed != Nat::from(brute) {
            return Err(format!("count_ssl({n}) = {computed} but brute force found {brute}"));
        }
    }
    Ok(format!("n<={max_n}: lattice counts match brute force"))
}

fn ssd_vs_brute(max_n: usize) -> Result<String, String> {
    let mut engine = CountEngine::<Nat>::new();
    for n in 1..=max_n {
        let computed = engine.count_ssd(n).map_err(|e| e.to_string())?;
        let brute = brute_count_ssd(n).map_err(|e| e.to_string())?;
        if computed != Nat::from(brute) {
            return Err(format!("count_ssd({n}) = {computed} but brute force found {brute}"));
        }
    }
    Ok(format!("n<={max_n}: diagram counts match brute force"))
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    /// `k` distinct values from `1..=n`, uniformly, via a partial shuffle.
    fn distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (1..=n).collect();
        for s in 0..k {
            let t = s + self.below(n - s);
            pool.swap(s, t);
        }
        pool.truncate(k);
        pool
    }
}

fn check_quotient(m: usize, n: usize, tau: &PartialPermutation) -> Result<(), String> {
    let q = build_quotient(m, n, tau).map_err(|e| e.to_string())?;
    let formula = quotient_size_formula(m, n, tau).map_err(|e| e.to_string())?;
    if q.block_count() != formula {
        return Err(format!(
            "quotient of {tau:?} on {m}x{n} has {} blocks, formula says {formula}",
            q.block_count()
        ));
    }
    let recovered = source_cells(&q);
    let expected = PartialPermutation::new(m, n, tau.pairs().to_vec()).expect("valid pairs");
    if recovered != expected {
        return Err(format!(
            "source cells of {tau:?} on {m}x{n} came back as {recovered:?}"
        ));
    }
    Ok(())
}

fn quotient_formula() -> Result<String, String> {
    // Exhaustive over small grids and supports.
    let mut cases = 0usize;
    for m in 1..=4usize {
        for n in 1..=4usize {
            for k in 0..=m.min(n).min(2) {
                let rows = combinations(m, k);
                let cols = arrangements(n, k);
                for r in &rows {
                    for c in &cols {
                        let pairs: Vec<(usize, usize)> =
                            r.iter().copied().zip(c.iter().copied()).collect();
                        let tau = PartialPermutation::new(m, n, pairs).expect("valid by construction");
                        check_quotient(m, n, &tau)?;
                        cases += 1;
                    }
                }
            }
        }
    }
    // Randomized over larger grids and denser supports.
    let mut rng = SplitMix64(0x5eed_0001);
    for _ in 0..200 {
        let m = 1 + rng.below(7);
        let n = 1 + rng.below(7);
        let k = rng.below(m.min(n) + 1);
        let mut rows = rng.distinct(m, k);
        rows.sort_unstable();
        let cols = rng.distinct(n, k);
        let pairs: Vec<(usize, usize)> = rows.into_iter().zip(cols).collect();
        let tau = PartialPermutation::new(m, n, pairs).expect("valid by construction");
        check_quotient(m, n, &tau)?;
        cases += 1;
    }
    Ok(format!("{cases} quotients match the size formula and round-trip"))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn arrangements(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n + 1];
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if used[v] {
                continue;
            }
            used[v] = true;
            cur.push(v);
            rec(n, k, cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }
    rec(n, k, &mut cur, &mut used, &mut out);
    out
}

fn lattice_properties(max_h: usize) -> Result<String, String> {
    let mut lattices = 0usize;
    for h in 0..=max_h {
        for p in enumerate_permutations(h).map_err(|e| e.to_string())? {
            let lattice = build_lattice(&p);
            if lattice.size() != h + 1 + p.inversions() {
                return Err(format!(
                    "lattice of {p} has {} elements, expected {}",
                    lattice.size(),
                    h + 1 + p.inversions()
                ));
            }
            if !lattice.is_semimodular() {
                return Err(format!("lattice of {p} is not semimodular"));
            }
            if !lattice.is_slim() {
                return Err(format!("lattice of {p} is not slim"));
            }
            if lattice.is_distributive() != p.avoids_321() {
                return Err(format!(
                    "lattice of {p}: distributivity disagrees with 321 avoidance"
                ));
            }
            if h > 0 {
                let q = build_quotient(h, h, &p.graph()).map_err(|e| e.to_string())?;
                if source_cells(&q) != p.graph() {
                    return Err(format!("source cells of {p} do not recover its graph"));
                }
            }
            lattices += 1;
        }
    }
    Ok(format!("h<={max_h}: {lattices} lattices pass the structure checks"))
}

fn catalan_avoiders(max_h: usize) -> Result<String, String> {
    for h in 0..=max_h {
        let avoiders = count_321_avoiders(h).map_err(|e| e.to_string())?;
        let catalan = count_distributive_diagrams::<Nat>(h);
        if Nat::from(avoiders) != catalan {
            return Err(format!(
                "degree {h}: {avoiders} avoiders but the Catalan number is {catalan}"
            ));
        }
    }
    Ok(format!("h<={max_h}: 321 avoiders match the Catalan numbers"))
}

fn iso_vs_block(max_h: usize) -> Result<String, String> {
    let mut pairs = 0usize;
    for h in 0..=max_h {
        let perms: Vec<_> = enumerate_permutations(h)
            .map_err(|e| e.to_string())?
            .collect();
        let lattices: Vec<_> = perms.iter().map(build_lattice).collect();
        let blocks: Vec<_> = perms.iter().map(|p| p.block_canonical()).collect();
        for a in 0..perms.len() {
            for b in 0..perms.len() {
                let iso = lattices_isomorphic(&lattices[a], &lattices[b])
                    .map_err(|e| e.to_string())?;
                if iso != (blocks[a] == blocks[b]) {
                    return Err(format!(
                        "{} vs {}: isomorphism and block equality disagree",
                        perms[a], perms[b]
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("h<={max_h}: {pairs} lattice pairs match block equality"))
}
