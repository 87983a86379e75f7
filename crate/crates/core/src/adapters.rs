//! Bit-exact emission of ordinary formulas for external solvers, plus a
//! process-invocation contract driven by configurable tool profiles. No
//! external tool is bundled or assumed present; everything here also works
//! with stub processes.

use crate::error::{Error, Result};
use crate::formula::{Formula, Kind};
use crate::prop::Cnf;
use std::collections::BTreeMap;
use std::io::Write as _;
use std::time::{Duration, Instant};

/// Standard DIMACS with the atom-to-variable table as `c map` comments.
pub fn emit_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    for (atom, var) in &cnf.atom_map {
        out.push_str(&format!("c map {} {}\n", atom.as_str(), var));
    }
    out.push_str(&format!("p cnf {} {}\n", cnf.n_vars, cnf.clauses.len()));
    for clause in &cnf.clauses {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

/// Internal reader for our own emission (round-trip checks).
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut n_vars = 0usize;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut atom_map = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c map ") {
            let mut parts = rest.split_whitespace();
            let atom = parts.next().ok_or(Error::ModelFormat {
                line: lineno + 1,
                msg: "c map needs atom and index".into(),
            })?;
            let idx: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::ModelFormat {
                    line: lineno + 1,
                    msg: "c map needs a numeric index".into(),
                })?;
            atom_map.push((crate::formula::Atom::new(atom), idx));
            continue;
        }
        if line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf ") {
            let mut parts = rest.split_whitespace();
            n_vars = parts.next().and_then(|s| s.parse().ok()).unwrap_or(0);
            continue;
        }
        let mut clause = Vec::new();
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::ModelFormat {
                line: lineno + 1,
                msg: format!("bad literal `{tok}`"),
            })?;
            if lit == 0 {
                break;
            }
            clause.push(lit);
        }
        clauses.push(clause);
    }
    Ok(Cnf { n_vars, clauses, atom_map })
}

/// LTL solver dialect: `G F X U W & | ! -> <-> 1 0`, fully parenthesized.
pub fn emit_ltl_text(phi: &Formula) -> Result<String> {
    fn go(phi: &Formula, out: &mut String) -> Result<()> {
        match phi.kind() {
            Kind::True => out.push('1'),
            Kind::False => out.push('0'),
            Kind::Atom(a) => out.push_str(a.as_str()),
            Kind::NegAtom(a) => {
                out.push_str("(! ");
                out.push_str(a.as_str());
                out.push(')');
            }
            Kind::Not(x) => {
                out.push_str("(! ");
                go(x, out)?;
                out.push(')');
            }
            Kind::And(l, r) | Kind::Or(l, r) | Kind::Implies(l, r) | Kind::Iff(l, r)
            | Kind::Until(l, r) | Kind::WeakUntil(l, r) => {
                let op = match phi.kind() {
                    Kind::And(..) => "&",
                    Kind::Or(..) => "|",
                    Kind::Implies(..) => "->",
                    Kind::Iff(..) => "<->",
                    Kind::Until(..) => "U",
                    _ => "W",
                };
                out.push('(');
                go(l, out)?;
                out.push_str(&format!(" {op} "));
                go(r, out)?;
                out.push(')');
            }
            Kind::Next(x) | Kind::Globally(x) | Kind::Finally(x) => {
                let op = match phi.kind() {
                    Kind::Next(_) => "X",
                    Kind::Globally(_) => "G",
                    _ => "F",
                };
                out.push('(');
                out.push_str(op);
                out.push(' ');
                go(x, out)?;
                out.push(')');
            }
            other => {
                return Err(Error::UnsupportedOperator(
                    crate::formula::op_name(other).into(),
                ))
            }
        }
        Ok(())
    }
    let mut out = String::new();
    go(phi, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct CtlDialect {
    /// Whether the target dialect has weak-until pairs; when it does not,
    /// `A(a W b)` is encoded as `!E(!b U !(a|b))` and `E(a W b)` as
    /// `E(a U b) | EG a`.
    pub allow_w: bool,
}

impl Default for CtlDialect {
    fn default() -> Self {
        CtlDialect { allow_w: true }
    }
}

/// CTL solver dialect, fully parenthesized.
pub fn emit_ctl_text(phi: &Formula, dialect: CtlDialect) -> Result<String> {
    fn go(phi: &Formula, d: CtlDialect, out: &mut String) -> Result<()> {
        match phi.kind() {
            Kind::True => out.push('1'),
            Kind::False => out.push('0'),
            Kind::Atom(a) => out.push_str(a.as_str()),
            Kind::NegAtom(a) => {
                out.push_str("(! ");
                out.push_str(a.as_str());
                out.push(')');
            }
            Kind::Not(x) => {
                out.push_str("(! ");
                go(x, d, out)?;
                out.push(')');
            }
            Kind::And(l, r) | Kind::Or(l, r) | Kind::Implies(l, r) | Kind::Iff(l, r) => {
                let op = match phi.kind() {
                    Kind::And(..) => "&",
                    Kind::Or(..) => "|",
                    Kind::Implies(..) => "->",
                    _ => "<->",
                };
                out.push('(');
                go(l, d, out)?;
                out.push_str(&format!(" {op} "));
                go(r, d, out)?;
                out.push(')');
            }
            Kind::Ax(x) | Kind::Ex(x) | Kind::Ag(x) | Kind::Af(x) | Kind::Eg(x) | Kind::Ef(x) => {
                let op = match phi.kind() {
                    Kind::Ax(_) => "AX",
                    Kind::Ex(_) => "EX",
                    Kind::Ag(_) => "AG",
                    Kind::Af(_) => "AF",
                    Kind::Eg(_) => "EG",
                    _ => "EF",
                };
                out.push('(');
                out.push_str(op);
                out.push(' ');
                go(x, d, out)?;
                out.push(')');
            }
            Kind::Au(l, r) => {
                out.push_str("(A ");
                emit_pair(l, r, "U", d, out)?;
                out.push(')');
            }
            Kind::Eu(l, r) => {
                out.push_str("(E ");
                emit_pair(l, r, "U", d, out)?;
                out.push(')');
            }
            Kind::Aw(l, r) => {
                if d.allow_w {
                    out.push_str("(A ");
                    emit_pair(l, r, "W", d, out)?;
                    out.push(')');
                } else {
                    // A(a W b) = !E(!b U !(a | b))
                    let enc = Formula::not(Formula::eu(
                        Formula::not(r.clone()),
                        Formula::not(Formula::or(l.clone(), r.clone())),
                    ));
                    go(&enc, d, out)?;
                }
            }
            Kind::Ew(l, r) => {
                if d.allow_w {
                    out.push_str("(E ");
                    emit_pair(l, r, "W", d, out)?;
                    out.push(')');
                } else {
                    // E(a W b) = E(a U b) | EG a
                    let enc = Formula::or(
                        Formula::eu(l.clone(), r.clone()),
                        Formula::eg(l.clone()),
                    );
                    go(&enc, d, out)?;
                }
            }
            other => {
                return Err(Error::UnsupportedOperator(
                    crate::formula::op_name(other).into(),
                ))
            }
        }
        Ok(())
    }
    fn emit_pair(
        l: &Formula,
        r: &Formula,
        op: &str,
        d: CtlDialect,
        out: &mut String,
    ) -> Result<()> {
        out.push('(');
        go(l, d, out)?;
        out.push_str(&format!(" {op} "));
        go(r, d, out)?;
        out.push(')');
        Ok(())
    }
    let mut out = String::new();
    go(phi, dialect, &mut out)?;
    Ok(out)
}

/// One external tool profile from the configuration file.
#[derive(Debug, Clone)]
pub struct ToolProfile {
    pub name: String,
    /// Command template; `{file}` is replaced by the input path.
    pub command: String,
    pub valid_pattern: String,
    pub invalid_pattern: String,
    pub timeout_s: u64,
}

/// Tool profiles are read from a TOML file selected by `CTXLOGIC_CONFIG`:
///
/// ```toml
/// [profile.mysolver]
/// command = "mysolver --check {file}"
/// valid_pattern = "VALID"
/// invalid_pattern = "INVALID"
/// timeout_s = 10
/// ```
pub fn load_profiles(text: &str) -> Result<BTreeMap<String, ToolProfile>> {
    let value: toml::Value = text
        .parse()
        .map_err(|e| Error::Config(format!("bad config: {e}")))?;
    let mut out = BTreeMap::new();
    let Some(profiles) = value.get("profile").and_then(|p| p.as_table()) else {
        return Ok(out);
    };
    for (name, body) in profiles {
        let get = |key: &str| -> Result<String> {
            body.get(key)
                .and_then(|v| v.as_str())
                .map(|s| s.to_string())
                .ok_or_else(|| Error::Config(format!("profile.{name}: missing `{key}`")))
        };
        let profile = ToolProfile {
            name: name.clone(),
            command: get("command")?,
            valid_pattern: get("valid_pattern")?,
            invalid_pattern: get("invalid_pattern")?,
            timeout_s: body
                .get("timeout_s")
                .and_then(|v| v.as_integer())
                .unwrap_or(60) as u64,
        };
        out.insert(name.clone(), profile);
    }
    Ok(out)
}

pub fn load_profiles_from_env() -> Result<BTreeMap<String, ToolProfile>> {
    match std::env::var("CTXLOGIC_CONFIG") {
        Ok(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
            load_profiles(&text)
        }
        Err(_) => Ok(BTreeMap::new()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExternalVerdict {
    Valid,
    Invalid,
}

/// Write the check text to a temp file, run the profile's command on it and
/// map the output through the profile's patterns. Never guesses: unmatched
/// output or a nonzero exit is an error.
pub fn run_external(check_text: &str, profile: &ToolProfile) -> Result<ExternalVerdict> {
    let mut file = tempfile::NamedTempFile::new()
        .map_err(|e| Error::ExternalTool(format!("temp file: {e}")))?;
    file.write_all(check_text.as_bytes())
        .map_err(|e| Error::ExternalTool(format!("temp file: {e}")))?;
    let path = file.path().to_string_lossy().to_string();

    let parts: Vec<String> = profile
        .command
        .split_whitespace()
        .map(|p| p.replace("{file}", &path))
        .collect();
    if parts.is_empty() {
        return Err(Error::Config(format!("profile {}: empty command", profile.name)));
    }
    let mut child = std::process::Command::new(&parts[0])
        .args(&parts[1..])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .map_err(|e| Error::ExternalTool(format!("spawn {}: {e}", parts[0])))?;

    let deadline = Instant::now() + Duration::from_secs(profile.timeout_s);
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) => {
                if Instant::now() > deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(Error::ExternalTimeout(profile.timeout_s));
                }
                std::thread::sleep(Duration::from_millis(10));
            }
            Err(e) => return Err(Error::ExternalTool(format!("wait: {e}"))),
        }
    }
    let output = child
        .wait_with_output()
        .map_err(|e| Error::ExternalTool(format!("output: {e}")))?;
    if !output.status.success() {
        return Err(Error::ExternalTool(format!(
            "{} exited with {}: {}",
            parts[0],
            output.status,
            String::from_utf8_lossy(&output.stderr)
        )));
    }
    let stdout = String::from_utf8_lossy(&output.stdout);
    // The more specific pattern wins when one is a substring of the other
    // (e.g. "unsatisfiable" vs "satisfiable").
    let valid_hit = stdout.contains(&profile.valid_pattern);
    let invalid_hit = stdout.contains(&profile.invalid_pattern);
    match (valid_hit, invalid_hit) {
        (true, false) => Ok(ExternalVerdict::Valid),
        (false, true) => Ok(ExternalVerdict::Invalid),
        (true, true) => {
            if profile.valid_pattern.len() >= profile.invalid_pattern.len() {
                Ok(ExternalVerdict::Valid)
            } else {
                Ok(ExternalVerdict::Invalid)
            }
        }
        (false, false) => Err(Error::ExternalTool(format!(
            "output matched neither pattern: {}",
            stdout.trim()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Logic;
    use crate::parser::parse_formula;

    #[test]
    fn dimacs_format() {
        let cnf = Cnf { n_vars: 2, clauses: vec![vec![1, -2]], atom_map: vec![] };
        assert_eq!(emit_dimacs(&cnf), "p cnf 2 1\n1 -2 0\n");
        let cnf = Cnf { n_vars: 0, clauses: vec![], atom_map: vec![] };
        assert_eq!(emit_dimacs(&cnf), "p cnf 0 0\n");
    }

    #[test]
    fn dimacs_round_trip() {
        let phi = parse_formula("(p | q) & (!p -> (q <-> r))", Logic::Prop).unwrap();
        let cnf = crate::prop::tseitin(&phi).unwrap();
        let back = parse_dimacs(&emit_dimacs(&cnf)).unwrap();
        assert_eq!(back.n_vars, cnf.n_vars);
        assert_eq!(back.clauses, cnf.clauses);
        assert_eq!(back.atom_map.len(), cnf.atom_map.len());
    }

    #[test]
    fn ltl_dialect() {
        let phi = parse_formula("G F p", Logic::Ltl).unwrap();
        assert_eq!(emit_ltl_text(&phi).unwrap(), "(G (F p))");
        let phi = parse_formula("true U (p & !q)", Logic::Ltl).unwrap();
        assert_eq!(emit_ltl_text(&phi).unwrap(), "(1 U (p & (! q)))");
        let bad = Formula::ag(Formula::atom("p"));
        assert!(matches!(
            emit_ltl_text(&bad),
            Err(Error::UnsupportedOperator(_))
        ));
    }

    #[test]
    fn ctl_dialect_w_encoding() {
        let phi = parse_formula("A(p W q)", Logic::Ctl).unwrap();
        assert_eq!(
            emit_ctl_text(&phi, CtlDialect { allow_w: true }).unwrap(),
            "(A (p W q))"
        );
        assert_eq!(
            emit_ctl_text(&phi, CtlDialect { allow_w: false }).unwrap(),
            "(! (E ((! q) U (! (p | q)))))"
        );
    }

    #[test]
    fn emission_is_stable() {
        let phi = parse_formula("(G F p & c[true]) | c[false]", Logic::Ltl).unwrap();
        let sigma = crate::reduction::canonical_instantiation(
            &phi,
            Logic::Ltl,
            crate::formula::Mode::Monotonic,
        );
        let inst = sigma.instantiate(&phi).unwrap();
        let a = emit_ltl_text(&inst).unwrap();
        let b = emit_ltl_text(&inst).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("((("));
    }

    #[test]
    fn external_stub_contract() {
        let profile = ToolProfile {
            name: "stub".into(),
            command: "sh -c echo_unsat_{file}".into(),
            valid_pattern: "unsatisfiable".into(),
            invalid_pattern: "satisfiable".into(),
            timeout_s: 5,
        };
        // `sh -c <arg>` with an argument that is not a real script would
        // fail; use a direct echo instead.
        let profile = ToolProfile {
            command: "echo the instance is unsatisfiable".into(),
            ..profile
        };
        assert_eq!(run_external("x", &profile).unwrap(), ExternalVerdict::Valid);
        let profile = ToolProfile {
            command: "echo satisfiable".into(),
            ..profile
        };
        assert_eq!(run_external("x", &profile).unwrap(), ExternalVerdict::Invalid);
    }

    #[test]
    fn external_timeout() {
        let profile = ToolProfile {
            name: "sleepy".into(),
            command: "sleep 30".into(),
            valid_pattern: "VALID".into(),
            invalid_pattern: "INVALID".into(),
            timeout_s: 1,
        };
        assert!(matches!(
            run_external("x", &profile),
            Err(Error::ExternalTimeout(_))
        ));
    }

    #[test]
    fn config_parsing() {
        let text = r#"
[profile.fast]
command = "solver {file}"
valid_pattern = "VALID"
invalid_pattern = "INVALID"
timeout_s = 3

[profile.slow]
command = "other {file}"
valid_pattern = "unsat"
invalid_pattern = "sat"
"#;
        let profiles = load_profiles(text).unwrap();
        assert_eq!(profiles.len(), 2);
        assert_eq!(profiles["fast"].timeout_s, 3);
        assert_eq!(profiles["slow"].timeout_s, 60);
        assert_eq!(profiles["slow"].valid_pattern, "unsat");
    }
}
