mod common;

use starq_core::cochain::hochschild_delta;
use starq_core::poisson::{ExplicitModel, PoissonMode, SymbolicModel};
use starq_core::rational::int;
use starq_core::star::{
    ansatz_basis, assemble_rhs, build_star, construct, level_residuals, opo_audit, ordered_experiment,
    AuditStatus, BuildOptions, CochainSystem, ExperimentOptions, Gauge, StarProduct,
};
use starq_core::verify::{
    commutator_probe, constant_bivector, moyal_levels, verify_levels, PoissonVector, VerifyOptions,
};
use starq_core::{Cochain, Coefficient, JetPolynomial, Polynomial, StarError};

use common::*;

fn symbolic(order: usize) -> StarProduct<JetPolynomial> {
    build_star(&SymbolicModel::new(PoissonMode::NablaPhi), &BuildOptions::new(order)).unwrap()
}

fn explicit(phi: &str, order: usize) -> StarProduct<Polynomial> {
    build_star(&ExplicitModel::nabla_phi(poly(phi)), &BuildOptions::new(order)).unwrap()
}

fn assert_structural<C: Coefficient>(star: &StarProduct<C>) {
    assert_eq!(star.levels[0], Cochain::multiplication());
    for (k, m) in star.levels.iter().enumerate().skip(1) {
        let s = if k % 2 == 0 { int(1) } else { int(-1) };
        assert_eq!(m.permute(&[1, 0]), m.scale(&s), "parity of M_{k}");
        for (slots, _) in m.terms() {
            assert!(slots.iter().all(|i| !i.is_empty()), "M_{k} has a constant slot {slots:?}");
            if k >= 2 {
                assert!(slots[0].len() + slots[1].len() >= 3, "M_{k} has slot total < 3");
            }
        }
    }
    for (k, r) in level_residuals(star).unwrap().iter().enumerate() {
        assert!(r.is_zero(), "δM_{} ≠ R_{}", k + 2, k + 2);
    }
    assert!(star.reports.iter().all(|r| r.is_zero));
}

#[test]
fn symbolic_levels_are_structurally_sound() {
    let star = symbolic(3);
    assert_eq!(star.order(), 3);
    assert_structural(&star);
    assert_eq!(star.reports.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 3]);
    assert!(star.reports[1].parity_path);
}

#[test]
fn rhs_is_a_cocycle_and_vanishes_at_first_order() {
    let star = symbolic(3);
    assert!(assemble_rhs(&star.levels, 1).unwrap().is_zero());
    for k in 2..=3 {
        let r = assemble_rhs(&star.levels, k).unwrap();
        assert!(!r.is_zero());
        assert!(hochschild_delta(&r).is_zero(), "δR_{k} ≠ 0");
    }
}

#[test]
fn second_level_lies_in_the_graded_ansatz() {
    let star = symbolic(2);
    let basis = ansatz_basis(PoissonMode::NablaPhi, 2, 1);
    let mut sys = CochainSystem::new(basis.len());
    let cols: Vec<(usize, &Cochain<JetPolynomial>)> = basis.iter().enumerate().collect();
    sys.add_equation(&cols, &star.levels[2]);
    assert!(sys.solve().is_some());
}

#[test]
fn first_level_is_half_the_bracket() {
    let phi = poly("x1^2*x2 + x2*x3^3 - x1");
    let star = explicit("x1^2*x2 + x2*x3^3 - x1", 1);
    let p = PoissonVector::gradient(&phi);
    for [f, g, _] in monomial_triples(4).iter().filter(|t| t[2].degree() == Some(0)) {
        let m1 = star.levels[1].eval(&[f.clone(), g.clone()]).unwrap();
        assert_eq!(m1.scale(&int(2)), p.bracket(f, g));
    }
}

#[test]
fn constant_bracket_reproduces_moyal() {
    let star = explicit("x3", 4);
    let p = constant_bivector(&PoissonVector::gradient(&poly("x3"))).unwrap();
    let moyal = moyal_levels(&p, 4).unwrap();
    assert_eq!(star.levels, moyal);
    let [x1, x2, _] = coordinates();
    let c = commutator_probe(&star.levels, &x1, &x2).unwrap();
    assert_eq!(c[1], Polynomial::one());
    assert!(c.iter().enumerate().all(|(k, v)| k == 1 || v.is_zero()));
}

#[test]
fn linear_bracket_gives_angular_momentum_relations() {
    let star = explicit("1/2*x1^2 + 1/2*x2^2 + 1/2*x3^2", 3);
    let [x1, x2, x3] = coordinates();
    assert_eq!(commutator_probe(&star.levels, &x1, &x2).unwrap()[1], x3);
    assert_eq!(commutator_probe(&star.levels, &x2, &x3).unwrap()[1], x1);
    assert_eq!(commutator_probe(&star.levels, &x3, &x1).unwrap()[1], x2);
}

#[test]
fn specialized_symbolic_products_verify() {
    let star = symbolic(3);
    let mut rng = rng(31);
    for _ in 0..3 {
        let phi = polynomial(&mut rng, 4, 4);
        let special = star.specialize(&phi, None).unwrap();
        let report = verify_levels(&special.levels, Some(&PoissonVector::gradient(&phi)), &VerifyOptions::default())
            .unwrap();
        assert!(report.pass, "phi = {phi}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn explicit_products_are_structurally_sound() {
    for phi in ["x1*x2*x3", "x1^3*x2 + x2*x3^2 - x1*x3"] {
        assert_structural(&explicit(phi, 3));
    }
}

#[test]
fn ordered_gauge_levels_lift_to_ordered_operators() {
    let model = SymbolicModel::new(PoissonMode::NablaPhi);
    let star = build_star(&model, &BuildOptions::new(3)).unwrap();
    let audit = opo_audit(&star, &model, 2).unwrap();
    assert_eq!(audit.len(), 4);
    assert!(audit.iter().all(|a| a.status == AuditStatus::Opo));
}

#[test]
fn canonical_gauge_breaks_the_ordered_lift() {
    let model = SymbolicModel::new(PoissonMode::NablaPhi);
    let star = build_star(&model, &BuildOptions::new(3).gauge(Gauge::Canonical)).unwrap();
    assert_structural(&star);
    let audit = opo_audit(&star, &model, 2).unwrap();
    assert_eq!(audit[1].status, AuditStatus::Opo);
    assert_eq!(audit[2].status, AuditStatus::LiftFailed);
    assert_eq!(audit[2].opo_reselectable, Some(true));
}

#[test]
fn canonical_gauge_is_obstructed_at_fourth_order() {
    let model = SymbolicModel::new(PoissonMode::NablaPhi);
    let run = construct(&model, &BuildOptions::new(4).gauge(Gauge::Canonical));
    assert!(matches!(run.failure, Some(StarError::ObstructionNonzero { level: 4 })));
    let r4 = run.star.reports.iter().find(|r| r.k == 4).unwrap();
    assert!(!r4.coordinate_witness.is_zero());
    assert_eq!(r4.shortcut_witness.as_ref(), Some(&r4.coordinate_witness));
    assert_eq!(r4.shortcut.as_ref(), Some(&r4.ar));
}

#[test]
fn gradient_experiment_is_feasible() {
    let model = SymbolicModel::new(PoissonMode::NablaPhi).with_jet_order(5);
    let e = ordered_experiment(&model, &ExperimentOptions::default()).unwrap();
    assert!(e.m2_unique);
    assert!(e.feasible);
    assert_eq!(e.rank, e.augmented_rank);
    assert!(e.solution.is_some());
}

#[test]
fn order_zero_is_rejected() {
    let err = build_star(&SymbolicModel::new(PoissonMode::NablaPhi), &BuildOptions::new(0)).unwrap_err();
    assert!(matches!(err, StarError::Config(_)));
}
