use qtails_core::fault::Fault;
use qtails_core::registry::{self, positivity_check, verify, RunParams, Status};

fn status(id: &str, p: &RunParams) -> Status {
    let r = verify(id, p).unwrap();
    if r.status != Status::Pass {
        eprintln!("{r:?}");
    }
    r.status
}

#[test]
fn finite_families_to_twenty_five() {
    let p = RunParams { j_max: 25, ..RunParams::with_order(60) };
    for id in ["F12", "F2"] {
        assert_eq!(status(id, &p), Status::Pass, "{id}");
    }
}

#[test]
fn symmetry_and_truncated_family_with_cap_fifteen() {
    let mut p = RunParams { j_max: 15, ..RunParams::with_order(40) };
    p.caps.insert("d".into(), 15);
    for id in ["SYM", "AOT"] {
        assert_eq!(status(id, &p), Status::Pass, "{id}");
    }
}

#[test]
fn andrews_onofri_at_forty() {
    assert_eq!(status("AO", &RunParams::with_order(40)), Status::Pass);
}

#[test]
fn positivity_to_one_hundred() {
    let r = positivity_check(100, None).unwrap();
    assert_eq!(r.report.status, Status::Pass);
    assert_eq!(r.coefficients.len(), 101);
    for (n, c) in r.coefficients.iter().enumerate().skip(1) {
        let v: i64 = c.parse().unwrap_or_else(|_| panic!("q^{n} coefficient {c} is not an integer"));
        assert!(v > 0, "q^{n} coefficient {v}");
    }
}

#[test]
fn every_fault_breaks_some_entry() {
    for f in Fault::ALL {
        let p = RunParams { fault: Some(f), ..RunParams::default() };
        let s = registry::verify_all(&p);
        let positivity = positivity_check(40, Some(f)).map(|r| r.report.status == Status::Pass).unwrap_or(false);
        assert!(!s.all_pass() || !positivity, "{f:?} went unnoticed");
    }
}

#[test]
fn passing_persists_at_lower_order() {
    let high = RunParams::with_order(30);
    let low = RunParams::with_order(12);
    for def in registry::registry() {
        assert_eq!(status(def.id, &high), Status::Pass, "{}", def.id);
        assert_eq!(status(def.id, &low), Status::Pass, "{}", def.id);
    }
}

#[test]
fn larger_caps_still_pass() {
    for def in registry::registry() {
        let base = RunParams::with_order(20);
        let mut p = base.clone();
        for (name, cap) in def.required_caps(&base) {
            p.caps.insert(name.to_string(), cap + 3);
        }
        assert_eq!(status(def.id, &p), Status::Pass, "{}", def.id);
    }
}

#[test]
fn injected_fault_fails_with_a_located_mismatch() {
    let p = RunParams { fault: Some(Fault::SigmaWrongSign), ..RunParams::with_order(20) };
    let r = verify("SIG", &p).unwrap();
    assert_eq!(r.status, Status::Fail);
    let m = r.first_mismatch.unwrap();
    assert!(m.q_order <= 20);
    assert_ne!(m.lhs, m.rhs);
}

#[test]
fn thread_count_does_not_change_results() {
    let p = RunParams::with_order(15);
    let defs: Vec<_> = registry::registry().iter().collect();
    let a = registry::verify_many(&defs, &p);
    let b = registry::verify_many(&defs, &p);
    let strip = |s: &registry::Summary| {
        s.reports.iter().map(|r| (r.id.clone(), r.status, r.first_mismatch.is_some())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}
