//! The ten acceptance criteria, each evaluated from the engine's own reports.
//!
//! Every comparison is exact: a check passes only with a zero residual in
//! Q(q). One PASS/FAIL line is printed per criterion. Criteria 5, 6 and 7
//! fail because the engine refutes printed values (see the README); the
//! test asserts that exactly those fail, so a regression in any other
//! criterion, or an unexpected fix, shows up as a test failure.

use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::BigRational;
use qcalc::cli::{run_suite, SuiteId, SuiteOptions, SuiteReport};
use qcalc::verify::Status;

const SEED: u64 = 1;
const EXPECTED_FAILURES: [u8; 3] = [5, 6, 7];

struct Verdict {
    number: u8,
    title: &'static str,
    problems: Vec<String>,
}

impl Verdict {
    fn new(number: u8, title: &'static str) -> Self {
        Verdict { number, title, problems: Vec::new() }
    }

    fn passed(&self) -> bool {
        self.problems.is_empty()
    }

    fn note(&mut self, id: &str, what: String) {
        let head = format!("{id}: ");
        if !self.problems.iter().any(|p| p.starts_with(&head)) {
            self.problems.push(format!("{head}{what}"));
        }
    }

    fn require_verified(&mut self, r: &SuiteReport, id: &str) {
        match r.get(id) {
            None => self.note(id, "missing".into()),
            Some(e) if e.status != Status::Verified => self.note(id, format!("{:?}, residual {}", e.status, e.residual)),
            Some(_) => {}
        }
    }

    fn require_present(&mut self, r: &SuiteReport, id: &str) {
        if r.get(id).is_none() {
            self.note(id, "missing".into());
        }
    }

    /// Every entry selected by `select` is verified, and there is at least
    /// `min` of them.
    fn require_all_verified(&mut self, r: &SuiteReport, min: usize, select: impl Fn(&str) -> bool) {
        let chosen: Vec<_> = r.entries.iter().filter(|e| select(&e.id)).collect();
        if chosen.len() < min {
            self.problems.push(format!("expected at least {min} entries, found {}", chosen.len()));
        }
        for e in chosen.into_iter().filter(|e| e.status != Status::Verified) {
            self.note(&e.id, format!("{:?}, residual {}", e.status, e.residual));
        }
    }

    /// No entry selected by `select` failed; informational mismatches are
    /// allowed.
    fn require_none_failed(&mut self, r: &SuiteReport, select: impl Fn(&str) -> bool) {
        for e in r.entries.iter().filter(|e| select(&e.id) && e.status == Status::Failed) {
            self.note(&e.id, format!("Failed, residual {}", e.residual));
        }
    }

    fn line(&self) -> String {
        let mark = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{mark} [{:>2}] {}", self.number, self.title);
        for p in self.problems.iter().take(4) {
            s.push_str(&format!("\n          {p}"));
        }
        if self.problems.len() > 4 {
            s.push_str(&format!("\n          ... {} more", self.problems.len() - 4));
        }
        s
    }
}

fn group_presentation(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(1, "group presentation: six entry relations and q_det = 1");
    for id in [
        "group.entry.a1a2=q.a2a1",
        "group.entry.a1a3=q.a3a1",
        "group.entry.a2a4=q.a4a2",
        "group.entry.a3a4=q.a4a3",
        "group.entry.a2a3=a3a2",
        "group.entry.a1a4=a4a1+(q-1/q)a2a3",
        "group.qdet",
    ] {
        v.require_verified(r, id);
    }
    v
}

fn cartan_forms(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(2, "Cartan forms, q-trace, exchange and wedge relations");
    for id in ["cartan.omega1", "cartan.omega2", "cartan.omega3", "cartan.omega4", "cartan.qtrace"] {
        v.require_verified(r, id);
    }
    let exchange = |id: &str| {
        id.starts_with("cartan.omega") && (id.ends_with(".r") || id.ends_with(".f-") || id.ends_with(".f+"))
    };
    v.require_all_verified(r, 12, exchange);
    for id in [
        "cartan.(omega1)^2",
        "cartan.(omega2)^2",
        "cartan.(omega3)^2",
        "cartan.omega4=-q^2.omega1",
        "cartan.omega1omega2+q^4.omega2omega1",
        "cartan.omega1omega3+q^-4.omega3omega1",
        "cartan.omega2omega3+q^-2.omega3omega2",
    ] {
        v.require_verified(r, id);
    }
    v
}

fn calculus(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(3, "calculus: d compatible with every rule, d^2 = 0, local confluence");
    v.require_all_verified(r, 20, |id| id.starts_with("calculus.d-compatible["));
    v.require_verified(r, "calculus.d2.generators");
    v.require_verified(r, "calculus.d2.random-words");
    v.require_verified(r, "calculus.local-confluence");
    v
}

fn wznw(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(4, "WZNW kinetic term, WZ 3-form coefficient, background fields");
    v.require_all_verified(r, 4, |id| id.starts_with("wznw.kinetic.group["));
    v.require_verified(r, "wz.closed");
    v.require_verified(r, "wz.proportional");
    v.require_verified(r, "wz.coefficient");
    v.require_all_verified(r, 2, |id| id.starts_with("metric.G.reassembly"));
    v.require_none_failed(r, |id| id.starts_with("metric."));
    v.require_none_failed(r, |id| id.starts_with("wznw.") || id.starts_with("wz."));
    v
}

fn coset(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(5, "coset: c1, c2, c3 and the Maurer-Cartan equations of examples 1-3");
    for n in 1..=3 {
        v.require_verified(r, &format!("coset.example{n}.c"));
        let prefix = format!("coset.example{n}.");
        v.require_none_failed(r, |id| id.starts_with(&prefix));
    }
    v.require_none_failed(r, |id| id.starts_with("coset.") && !id.contains("example"));
    v
}

fn vector_fields(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(6, "vector fields: operator algebra on words, inhomogeneous terms");
    for n in 1..=3 {
        v.require_verified(r, &format!("symops.vf.algebra[{n}]"));
    }
    v.require_all_verified(r, 9, |id| id.starts_with("symops.vf.inhomogeneous["));
    v
}

fn variations(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(7, "variations: exchange relations, compatibility, time derivatives");
    v.require_all_verified(r, 9, |id| id.starts_with("symops.variation.cr[") && !id.ends_with(".fit"));
    v.require_all_verified(r, 3, |id| id.starts_with("symops.compat["));
    v.require_all_verified(r, 9, |id| id.starts_with("symops.dt.printed.consistency["));
    v
}

fn quantum_plane(r: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(8, "quantum plane: series solution to order 8 and unequal-time relations");
    for id in [
        "qplane.solution.exchange",
        "qplane.solution.conserved",
        "qplane.unequal-time.rescaled",
        "qplane.unequal-time.lambda",
    ] {
        v.require_verified(r, id);
    }
    for id in ["qplane.solution.exchange", "qplane.solution.conserved"] {
        if r.get(id).and_then(|e| e.detail.as_deref()) != Some("zero to order 8") {
            v.problems.push(format!("{id}: not exact to order 8"));
        }
    }
    v.require_present(r, "qplane.unequal-time.printed-lambda");
    v
}

fn classical_limit(generic: &SuiteReport, classical: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(9, "classical limit: every verified identity still holds at q = 1");
    for e in generic.entries.iter().filter(|e| e.status == Status::Verified) {
        v.require_verified(classical, &e.id);
    }
    v
}

fn determinism(a: &SuiteReport, b: &SuiteReport) -> Verdict {
    let mut v = Verdict::new(10, "determinism: identical JSON reports for the same seed");
    let ja = a.clone().without_timing().to_json().expect("json");
    let jb = b.clone().without_timing().to_json().expect("json");
    if ja != jb {
        let line = ja.lines().zip(jb.lines()).position(|(x, y)| x != y).unwrap_or(0);
        v.problems.push(format!("reports differ at line {}", line + 1));
    }
    v
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let opts = SuiteOptions { seed: SEED, ..SuiteOptions::default() };
    let generic = run_suite(SuiteId::All, &opts).expect("suite");
    let again = run_suite(SuiteId::All, &opts).expect("suite");
    let one = BigRational::from_integer(1.into());
    let classical = run_suite(SuiteId::All, &SuiteOptions { q0: Some(one), ..opts.clone() }).expect("suite");
    let elapsed = start.elapsed();

    let verdicts = [
        group_presentation(&generic),
        cartan_forms(&generic),
        calculus(&generic),
        wznw(&generic),
        coset(&generic),
        vector_fields(&generic),
        variations(&generic),
        quantum_plane(&generic),
        classical_limit(&generic, &classical),
        determinism(&generic, &again),
    ];
    println!("tolerance: exact, zero residual in Q(q)");
    for v in &verdicts {
        println!("{}", v.line());
    }
    println!("wall time for all suites (three runs): {:.2} s", elapsed.as_secs_f64());

    let failed: BTreeSet<u8> = verdicts.iter().filter(|v| !v.passed()).map(|v| v.number).collect();
    assert_eq!(failed, EXPECTED_FAILURES.into_iter().collect::<BTreeSet<_>>());
    assert!(elapsed.as_secs() < 60, "suites took {elapsed:?}");
}
