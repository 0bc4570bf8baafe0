use kloos_core::identities::{run_suite, Status};
use kloos_core::parse_ring;

const ZOO: &[&str] = &[
    "Z/4",
    "Z/8",
    "Z/9",
    "Z/12",
    "Z/25",
    "Z/27",
    "GF(3)",
    "GF(4)",
    "GF(5)",
    "GF(7)",
    "GF(9)",
    "Fp[3;0,0,1]",
    "Fp[5;0,0,1]",
    "Z/4 x GF(3)",
    "triv(Z/2)",
    "triv(Z/4)",
    "sqz(2,2)",
    "sqz(3,2)",
];

#[test]
fn zoo_has_no_failures() {
    let mut failures = Vec::new();
    for spec in ZOO {
        let ring = parse_ring(spec).unwrap();
        for report in run_suite(&ring, None).unwrap() {
            eprintln!(
                "{spec:>14} {} {:<15} points={} {}",
                report.check,
                report.status.as_str(),
                report.points,
                report.reason.clone().unwrap_or_default()
            );
            if report.status == Status::Fail {
                failures.push(report.to_json().to_string());
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

use kloos_core::characters::{multiplicative_characters, quadratic_character};
use kloos_core::identities::{
    run_check, run_suite_with, Bindings, CheckReport, PerturbTarget, SuiteOptions,
};

fn integer(report: &CheckReport) -> i64 {
    assert_eq!(report.status, Status::Pass, "{}", report.to_json());
    i64::try_from(report.actual.as_ref().unwrap().as_integer().unwrap()).unwrap()
}

fn primitive_split(spec: &str) -> (Vec<usize>, Vec<usize>) {
    let ring = parse_ring(spec).unwrap();
    multiplicative_characters(&ring)
        .iter()
        .map(|c| (c.index(), c.is_primitive().unwrap()))
        .fold((Vec::new(), Vec::new()), |(mut p, mut n), (k, prim)| {
            if prim {
                p.push(k)
            } else {
                n.push(k)
            }
            (p, n)
        })
}

#[test]
fn second_unitary_moment_on_z9() {
    let ring = parse_ring("Z/9").unwrap();
    let (prim, non) = primitive_split("Z/9");
    assert_eq!((prim.len(), non.len()), (4, 2));
    for t in non {
        assert_eq!(
            integer(&run_check("C12", &ring, &Bindings::with_tau(t)).unwrap()),
            54
        );
    }
    for t in prim {
        assert_eq!(
            integer(&run_check("C12", &ring, &Bindings::with_tau(t)).unwrap()),
            27
        );
    }
}

#[test]
fn fourth_moment_values() {
    for (spec, value) in [("Z/9", 1458), ("Fp[3;0,0,1]", 1458), ("Z/25", 37500)] {
        let ring = parse_ring(spec).unwrap();
        let (prim, non) = primitive_split(spec);
        for t in non {
            assert_eq!(
                integer(&run_check("C15", &ring, &Bindings::with_tau(t)).unwrap()),
                value,
                "{spec}"
            );
        }
        // primitive twists carry no claim, only an empirical value
        let report = run_check("C15", &ring, &Bindings::with_tau(prim[0])).unwrap();
        assert_eq!(report.status, Status::NotApplicable);
        assert_eq!(report.empirical.len(), 1);
    }
}

#[test]
fn weighted_second_moment_on_z25() {
    let ring = parse_ring("Z/25").unwrap();
    let sigma = quadratic_character(&ring).unwrap().index();
    let (_, non) = primitive_split("Z/25");
    assert_eq!(non.len(), 4);
    for &t in &non {
        for &c in &non {
            let b = Bindings {
                tau: Some(t),
                chi: Some(c),
                ..Default::default()
            };
            let expected = if c == 0 || c == sigma { 500 } else { 0 };
            assert_eq!(integer(&run_check("C18", &ring, &b).unwrap()), expected);
        }
    }
}

#[test]
fn field_third_moment() {
    for (spec, value) in [("GF(5)", -14), ("GF(7)", 64)] {
        let ring = parse_ring(spec).unwrap();
        assert_eq!(
            integer(&run_check("C14", &ring, &Bindings::default()).unwrap()),
            value
        );
    }
    let report = run_check("C14", &parse_ring("GF(3)").unwrap(), &Bindings::default()).unwrap();
    assert_eq!(report.status, Status::NotApplicable);
    assert!(report.reason.unwrap().contains("−3"));
    assert_eq!(report.empirical.len(), 1);
}

#[test]
fn third_moment_on_z9_is_reported_empirically() {
    let report = run_check("C13", &parse_ring("Z/9").unwrap(), &Bindings::default()).unwrap();
    assert_eq!(report.status, Status::NotApplicable);
    assert_eq!(report.reason.as_deref(), Some("3 is not a unit"));
    assert_eq!(report.empirical.len(), 2);
}

#[test]
fn perturbations_are_detected() {
    let cases = [
        (
            "Z/9",
            PerturbTarget::Twisted,
            ["C01", "C15", "C16"].as_slice(),
        ),
        (
            "Z/25",
            PerturbTarget::Twisted,
            ["C01", "C15", "C16"].as_slice(),
        ),
        ("Z/12", PerturbTarget::Kloosterman, ["C07"].as_slice()),
        ("Z/9", PerturbTarget::Kloosterman, ["C07"].as_slice()),
    ];
    for (spec, target, ids) in cases {
        let ring = parse_ring(spec).unwrap();
        let reports = run_suite_with(
            &ring,
            Some(ids),
            SuiteOptions {
                perturb: Some(target),
            },
        )
        .unwrap();
        for r in reports {
            assert_eq!(r.status, Status::Fail, "{spec} {}", r.check);
            assert!(!r.witnesses.is_empty());
        }
    }
}

#[test]
fn suite_is_deterministic() {
    let ring = parse_ring("Z/4 x GF(3)").unwrap();
    let render = || {
        run_suite(&ring, None)
            .unwrap()
            .iter()
            .map(|r| r.to_json().to_string())
            .collect::<Vec<_>>()
    };
    let first = render();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    assert_eq!(first, single.install(render));
    assert_eq!(first, render());
}

#[test]
fn every_check_applies_somewhere() {
    for entry in kloos_core::identities::registry() {
        let applies = ZOO.iter().any(|spec| {
            run_check(entry.id, &parse_ring(spec).unwrap(), &Bindings::default())
                .unwrap()
                .status
                == Status::Pass
        });
        assert!(applies, "{} is never applicable on the zoo", entry.id);
    }
}
