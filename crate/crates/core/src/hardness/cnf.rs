use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::HardnessError;
use crate::gen::rng;

/// A variable index with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var as i64 + 1;
        write!(f, "{}", if self.positive { v } else { -v })
    }
}

/// Where a literal occurrence sits: clause index and position in the clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub clause: usize,
    pub position: usize,
}

/// Occurrences of one variable: the two positive ones in clause order, then
/// the negative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableOccurrences {
    pub positive: [Occurrence; 2],
    pub negative: Occurrence,
}

/// A CNF in which every clause has two or three literals and every variable
/// occurs exactly twice positively and once negatively. Planarity of the
/// variable-clause incidence graph is carried as an unchecked claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedCnf {
    variable_count: usize,
    clauses: Vec<Vec<Literal>>,
    occurrences: Vec<VariableOccurrences>,
    pub claimed_planar: bool,
}

/// Checks the clause-size and occurrence restrictions. A clause may repeat a
/// variable.
pub fn validate_cnf(
    variable_count: usize,
    clauses: Vec<Vec<Literal>>,
) -> Result<RestrictedCnf, HardnessError> {
    let mut pos: Vec<Vec<Occurrence>> = vec![Vec::new(); variable_count];
    let mut neg: Vec<Vec<Occurrence>> = vec![Vec::new(); variable_count];
    for (ci, clause) in clauses.iter().enumerate() {
        if !(2..=3).contains(&clause.len()) {
            return Err(HardnessError::ClauseSizeViolation {
                clause: ci,
                size: clause.len(),
            });
        }
        for (position, lit) in clause.iter().enumerate() {
            if lit.var >= variable_count {
                return Err(HardnessError::OccurrenceViolation {
                    var: lit.var,
                    detail: format!("variable out of range for {variable_count} variables"),
                });
            }
            let occ = Occurrence {
                clause: ci,
                position,
            };
            let side = if lit.positive { &mut pos } else { &mut neg };
            side[lit.var].push(occ);
        }
    }
    let mut occurrences = Vec::with_capacity(variable_count);
    for var in 0..variable_count {
        if pos[var].len() != 2 || neg[var].len() != 1 {
            return Err(HardnessError::OccurrenceViolation {
                var,
                detail: format!(
                    "{} positive and {} negative occurrences",
                    pos[var].len(),
                    neg[var].len()
                ),
            });
        }
        occurrences.push(VariableOccurrences {
            positive: [pos[var][0], pos[var][1]],
            negative: neg[var][0],
        });
    }
    Ok(RestrictedCnf {
        variable_count,
        clauses,
        occurrences,
        claimed_planar: false,
    })
}

impl RestrictedCnf {
    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn occurrences(&self, var: usize) -> VariableOccurrences {
        self.occurrences[var]
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// A satisfying assignment by exhaustive search.
    pub fn solve_bruteforce(&self) -> Result<Option<Vec<bool>>, HardnessError> {
        if self.variable_count > 24 {
            return Err(HardnessError::TooLarge {
                size: self.variable_count,
                limit: 24,
            });
        }
        for bits in 0u64..1 << self.variable_count {
            let a: Vec<bool> = (0..self.variable_count)
                .map(|i| bits >> i & 1 == 1)
                .collect();
            if self.is_satisfied_by(&a) {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// DIMACS CNF text.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF (`c` comments, one `p cnf` header, clauses ending in
/// `0`) and validates the restrictions.
pub fn parse_dimacs(text: &str) -> Result<RestrictedCnf, HardnessError> {
    let parse_err = |line: usize, msg: &str| HardnessError::Parse {
        line,
        message: msg.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(parse_err(
                    line_no,
                    "expected a single `p cnf <vars> <clauses>` header",
                ));
            }
            let n = f[2]
                .parse()
                .map_err(|_| parse_err(line_no, "bad variable count"))?;
            let m = f[3]
                .parse()
                .map_err(|_| parse_err(line_no, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(line_no, "clause before header"))?;
        for tok in t.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| parse_err(line_no, "bad literal"))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = x.unsigned_abs() as usize - 1;
                if var >= n {
                    return Err(parse_err(
                        line_no,
                        "literal exceeds the declared variable count",
                    ));
                }
                current.push(Literal {
                    var,
                    positive: x > 0,
                });
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing header"))?;
    if !current.is_empty() {
        return Err(parse_err(0, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(0, "clause count does not match the header"));
    }
    validate_cnf(n, clauses)
}

/// A random restricted instance on `variables` variables: the 3·`variables`
/// literal occurrences are shuffled and cut into clauses of two or three.
pub fn random_restricted_cnf(variables: usize, seed: u64) -> RestrictedCnf {
    let mut r = rng(seed);
    let mut lits: Vec<Literal> = (0..variables)
        .flat_map(|v| [Literal::pos(v), Literal::pos(v), Literal::neg(v)])
        .collect();
    lits.shuffle(&mut r);
    let mut clauses = Vec::new();
    let mut rest = &lits[..];
    while !rest.is_empty() {
        let size = match rest.len() {
            2 | 3 => rest.len(),
            4 => 2,
            _ => r.gen_range(2..=3),
        };
        clauses.push(rest[..size].to_vec());
        rest = &rest[size..];
    }
    validate_cnf(variables, clauses).expect("occurrence pattern holds by construction")
}

/// `count` distinct random instances on at most `max_vars` variables,
/// alternating between satisfiable and unsatisfiable ones while both kinds
/// keep turning up.
pub fn balanced_cnf_corpus(count: usize, max_vars: usize, seed: u64) -> Vec<RestrictedCnf> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let mut pending: [Vec<RestrictedCnf>; 2] = [Vec::new(), Vec::new()];
    let mut s = seed;
    let mut misses = 0;
    while out.len() < count {
        let want = out.len() % 2;
        if let Some(cnf) = pending[want].pop() {
            out.push(cnf);
            continue;
        }
        let cnf = random_restricted_cnf(1 + s as usize % max_vars.max(1), s);
        s += 1;
        if !seen.insert(cnf.to_dimacs()) {
            misses += 1;
            if misses > 100_000 {
                // one kind has run out
                let other = pending[1 - want].pop();
                match other {
                    Some(c) => out.push(c),
                    None => break,
                }
            }
            continue;
        }
        let unsat = cnf.solve_bruteforce().expect("tiny").is_none();
        pending[usize::from(unsat)].push(cnf);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_two_variable_example() {
        let k = validate_cnf(
            2,
            vec![
                vec![Literal::pos(0), Literal::pos(1)],
                vec![Literal::pos(0), Literal::pos(1)],
                vec![Literal::neg(0), Literal::neg(1)],
            ],
        )
        .unwrap();
        assert_eq!(k.literal_count(), 6);
        assert_eq!(
            k.occurrences(1).negative,
            Occurrence {
                clause: 2,
                position: 1
            }
        );
        assert!(k.solve_bruteforce().unwrap().is_some());
    }

    #[test]
    fn rejects_long_clauses_and_bad_counts() {
        let four = vec![vec![
            Literal::pos(0),
            Literal::pos(0),
            Literal::neg(0),
            Literal::pos(1),
        ]];
        assert!(matches!(
            validate_cnf(2, four),
            Err(HardnessError::ClauseSizeViolation { size: 4, .. })
        ));
        let triple = vec![
            vec![Literal::pos(0), Literal::pos(0), Literal::pos(0)],
            vec![Literal::neg(0), Literal::pos(0)],
        ];
        assert!(matches!(
            validate_cnf(1, triple),
            Err(HardnessError::OccurrenceViolation { var: 0, .. })
        ));
    }

    #[test]
    fn repeated_literals_can_make_instances_unsatisfiable() {
        let k = validate_cnf(
            2,
            vec![
                vec![Literal::pos(0), Literal::pos(0)],
                vec![Literal::pos(1), Literal::pos(1)],
                vec![Literal::neg(0), Literal::neg(1)],
            ],
        )
        .unwrap();
        assert_eq!(k.solve_bruteforce().unwrap(), None);
    }

    #[test]
    fn balanced_corpus_mixes_outcomes() {
        let corpus = balanced_cnf_corpus(20, 3, 0);
        assert_eq!(corpus.len(), 20);
        let unsat = corpus
            .iter()
            .filter(|c| c.solve_bruteforce().unwrap().is_none())
            .count();
        assert_eq!(unsat, 10);
    }

    #[test]
    fn dimacs_round_trip() {
        for seed in 0..20 {
            let k = random_restricted_cnf(1 + seed as usize % 4, seed);
            assert_eq!(parse_dimacs(&k.to_dimacs()).unwrap(), k);
        }
        assert!(parse_dimacs("p cnf 1 1\n1 1 -1").is_err());
    }
}
