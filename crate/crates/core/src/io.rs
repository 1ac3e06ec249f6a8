//! Text formats: genotype instances, solution files, instance generation.
//!
//! Instance format: one genotype per line over {0,1,2}, either contiguous
//! ("0212") or whitespace-separated ("0 2 1 2"), with an optional leading
//! "n m" header, blank lines and '#' comments ignored.
//!
//! Solution format: one line per genotype, "i<TAB>h<TAB>k" with 1-based
//! index i and h <= k lexicographically; unresolved genotypes of incomplete
//! solutions emit "i<TAB>-<TAB>-".

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Genotype, Haplotype, Instance};
use crate::solution::Solution;

/// Parses an instance. A first data line of exactly two integers is taken
/// as an "n m" header when the remaining line count matches n; header
/// counts are validated against the body.
pub fn parse_instance(text: &str) -> Result<Arc<Instance>> {
    let data_lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, strip_comment(line).trim()))
        .filter(|(_, line)| !line.is_empty())
        .collect();
    if data_lines.is_empty() {
        return Err(Error::parse(1, 1, "no genotypes in input"));
    }

    let mut rows = &data_lines[..];
    let mut header: Option<(usize, usize)> = None;
    if let Some(hdr) = try_header(data_lines[0].1) {
        if hdr.0 == data_lines.len() - 1 {
            header = Some(hdr);
            rows = &data_lines[1..];
        }
    }

    if rows.is_empty() {
        let (line, _) = data_lines[0];
        return Err(Error::parse(line, 1, "header present but no genotypes follow"));
    }

    let mut genotypes = Vec::with_capacity(rows.len());
    let mut m: Option<(usize, usize)> = None; // (length, defining line)
    for &(line_no, line) in rows {
        let geno = parse_genotype_row(line_no, line)?;
        match m {
            None => m = Some((geno.len(), line_no)),
            Some((expected, first_line)) => {
                if geno.len() != expected {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!(
                            "inconsistent site count: {} here vs {} on line {}",
                            geno.len(),
                            expected,
                            first_line
                        ),
                    ));
                }
            }
        }
        genotypes.push(geno);
    }

    if let Some((n, m_hdr)) = header {
        if n != genotypes.len() {
            return Err(Error::parse(
                data_lines[0].0,
                1,
                format!("header declares {} genotypes, found {}", n, genotypes.len()),
            ));
        }
        let found = genotypes[0].len();
        if m_hdr != found {
            return Err(Error::parse(
                data_lines[0].0,
                1,
                format!("header declares {m_hdr} sites, found {found}"),
            ));
        }
    }

    Ok(Arc::new(Instance::new(genotypes)?))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn try_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let n = it.next()?.parse::<usize>().ok()?;
    let m = it.next()?.parse::<usize>().ok()?;
    if it.next().is_some() || n == 0 {
        return None;
    }
    Some((n, m))
}

fn parse_genotype_row(line_no: usize, line: &str) -> Result<Genotype> {
    let mut symbols = String::with_capacity(line.len());
    for (idx, c) in line.char_indices() {
        match c {
            '0' | '1' | '2' => symbols.push(c),
            c if c.is_whitespace() => {}
            other => {
                return Err(Error::parse(
                    line_no,
                    idx + 1,
                    format!("invalid genotype symbol {other:?}"),
                ));
            }
        }
    }
    if symbols.is_empty() {
        return Err(Error::parse(line_no, 1, "empty genotype row"));
    }
    Genotype::parse(&symbols).map_err(|e| match e {
        Error::Parse { col, msg, .. } => Error::parse(line_no, col, msg),
        other => other,
    })
}

/// Canonical text form: "n m" header plus one contiguous row per genotype.
/// Round-trips through `parse_instance` exactly.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", instance.n(), instance.m());
    for g in instance.genotypes() {
        let _ = writeln!(out, "{g}");
    }
    out
}

/// Draws `pool_size` random haplotypes and conflates a random pool pair per
/// genotype, planting a feasible solution with |H| <= pool_size.
pub fn generate_instance<R: Rng>(
    n: usize,
    m: usize,
    pool_size: usize,
    rng: &mut R,
) -> Result<Arc<Instance>> {
    if pool_size < 2 {
        return Err(Error::InvalidParam("haplotype pool size must be >= 2".into()));
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidParam("instance dimensions must be >= 1".into()));
    }
    let pool: Vec<Haplotype> = (0..pool_size)
        .map(|_| {
            let mut h = Haplotype::zeros(m);
            for j in 0..m {
                h.set(j, rng.random_bool(0.5));
            }
            h
        })
        .collect();
    let genotypes = (0..n)
        .map(|_| {
            let a = &pool[rng.random_range(0..pool.len())];
            let b = &pool[rng.random_range(0..pool.len())];
            Genotype::conflate(a, b).expect("pool haplotypes share length")
        })
        .collect::<Vec<_>>();
    Ok(Arc::new(Instance::new(genotypes)?))
}

/// Writes the per-genotype resolving pairs of a solution.
pub fn serialize_solution(sol: &Solution) -> String {
    let mut out = String::new();
    for (i, pair) in sol.resolving_pairs().into_iter().enumerate() {
        match pair {
            Some((h, k)) => {
                let _ = writeln!(out, "{}\t{h}\t{k}", i + 1);
            }
            None => {
                let _ = writeln!(out, "{}\t-\t-", i + 1);
            }
        }
    }
    out
}

/// Reads a solution file back: per genotype, the resolving pair or None.
/// Validates indices, haplotype lengths and pair order.
pub fn parse_solution(
    text: &str,
    instance: &Instance,
) -> Result<Vec<Option<(Haplotype, Haplotype)>>> {
    let mut pairs: Vec<Option<(Haplotype, Haplotype)>> = vec![None; instance.n()];
    let mut seen = vec![false; instance.n()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, 1, format!("bad genotype index {:?}", fields[0])))?;
        if index == 0 || index > instance.n() {
            return Err(Error::parse(
                line_no,
                1,
                format!("genotype index {index} out of range 1..={}", instance.n()),
            ));
        }
        if seen[index - 1] {
            return Err(Error::parse(line_no, 1, format!("duplicate entry for genotype {index}")));
        }
        seen[index - 1] = true;
        if fields[1] == "-" && fields[2] == "-" {
            continue;
        }
        let h = Haplotype::parse(fields[1].trim())
            .map_err(|_| Error::parse(line_no, 1, format!("bad haplotype {:?}", fields[1])))?;
        let k = Haplotype::parse(fields[2].trim())
            .map_err(|_| Error::parse(line_no, 1, format!("bad haplotype {:?}", fields[2])))?;
        if h.len() != instance.m() || k.len() != instance.m() {
            return Err(Error::parse(
                line_no,
                1,
                format!("haplotype length does not match instance m={}", instance.m()),
            ));
        }
        pairs[index - 1] = Some((h.clone().min(k.clone()), h.max(k)));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::{CompleteSolution, IncompleteSolution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_plain_rows() {
        let inst = parse_instance("0212\n2210\n").unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.m(), 4);
    }

    #[test]
    fn parses_header_form() {
        let inst = parse_instance("2 4\n0212\n2210\n").unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.m(), 4);
    }

    #[test]
    fn parses_spaced_digits_and_comments() {
        let text = "# two genotypes\n\n0 2 1 2\n2 2 1 0 # trailing note\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.genotype(1).to_string(), "2210");
    }

    #[test]
    fn parses_worked_instance_block() {
        let text = "2210212\n2112110\n1212122\n1222122\n1202201\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.n(), 5);
        assert_eq!(inst.m(), 7);
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let err = parse_instance("0212\n2112110\n").unwrap_err();
        match err {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 2);
                assert!(msg.contains("inconsistent"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_symbol_with_position() {
        let err = parse_instance("0212\n0x12\n").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!((line, col), (2, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_input() {
        assert!(parse_instance("# nothing\n\n").is_err());
        assert!(parse_instance("").is_err());
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let err = parse_instance("3 4\n0212\n2210\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn two_token_first_row_without_matching_count_is_data() {
        // "2 2" could be a header, but three rows follow, so it is the
        // genotype (22)
        let inst = parse_instance("2 2\n02\n20\n22\n").unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.genotype(0).to_string(), "22");
    }

    #[test]
    fn roundtrip_is_exact() {
        let inst = parse_instance("2210212\n2112110\n1212122\n").unwrap();
        let text = serialize_instance(&inst);
        let again = parse_instance(&text).unwrap();
        assert_eq!(*inst, *again);
        assert_eq!(serialize_instance(&again), text);
    }

    #[test]
    fn generation_is_reproducible_and_planted() {
        let a = generate_instance(6, 8, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = generate_instance(6, 8, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(*a, *b);
        assert!(generate_instance(3, 4, 1, &mut ChaCha8Rng::seed_from_u64(5)).is_err());
    }

    #[test]
    fn solution_roundtrip_complete() {
        let inst = parse_instance("0212\n0202\n").unwrap();
        let sol = CompleteSolution::from_reps(
            inst.clone(),
            vec![Haplotype::parse("0010").unwrap(), Haplotype::parse("0000").unwrap()],
        )
        .unwrap();
        let text = serialize_solution(&Solution::Complete(sol.clone()));
        let pairs = parse_solution(&text, &inst).unwrap();
        let rebuilt = CompleteSolution::from_pairs(
            inst.clone(),
            &pairs.into_iter().map(|p| p.unwrap()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(rebuilt, sol);
    }

    #[test]
    fn unresolved_rows_serialize_as_dashes() {
        let inst = parse_instance("22\n00\n").unwrap();
        let sol = IncompleteSolution::from_haps(
            inst.clone(),
            [Haplotype::parse("01").unwrap()],
        )
        .unwrap();
        let text = serialize_solution(&Solution::Incomplete(sol));
        assert_eq!(text, "1\t-\t-\n2\t-\t-\n");
        let pairs = parse_solution(&text, &inst).unwrap();
        assert!(pairs.iter().all(|p| p.is_none()));
    }

    #[test]
    fn parse_solution_rejects_garbage() {
        let inst = parse_instance("22\n").unwrap();
        assert!(parse_solution("1\t01\n", &inst).is_err()); // missing field
        assert!(parse_solution("9\t01\t10\n", &inst).is_err()); // bad index
        assert!(parse_solution("1\t01\t10\n1\t01\t10\n", &inst).is_err()); // duplicate
        assert!(parse_solution("1\t0\t10\n", &inst).is_err()); // wrong length
    }
}
