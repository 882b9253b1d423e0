//! Subcommands. Each one validates the problem first and then fills a
//! [`Report`]; an artifact is returned when the command produces one.

use serde_json::{json, Value};

use hcomoment::applications::{
    covariant_obstruction, exact_comoment, multimoment_construct, multimoment_verify, universal_identity_holds,
    universal_momentum_report, weak_comoment, ExactError, MultiMomentMap, MultimomentDefect,
};
use hcomoment::cartan::nondegeneracy_check;
use hcomoment::exec::Exec;
use hcomoment::foundation::Rational;
use hcomoment::moment::{
    obstruction_report, solve_comoment, ActionDefect, Bigraded, ComomentMap, MorphismDefect, ObstructionLevel,
    ObstructionReport, Outcome, Problem, SolverOptions,
};
use hcomoment::observables::Observable;

use crate::artifact::{
    canonical_json, decode_comoment, encode_bigraded, encode_chain, encode_comoment, encode_multimoment, encode_weak,
    parse_json, ComomentArtifact,
};
use crate::problem::{load, AnyProblem, Loaded};
use crate::report::{rats, Report, Status};
use crate::terms::{encode_form, show_form, show_terms, show_vector, wedge_label, Backend};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Obstruction,
    Comoment,
    /// Check a co-moment artifact (given as text) against the problem.
    Verify {
        artifact: String,
    },
    Weak,
    Exact,
    Multimoment,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Obstruction => "obstruction",
            Command::Comoment => "comoment",
            Command::Verify { .. } => "verify",
            Command::Weak => "weak",
            Command::Exact => "exact",
            Command::Multimoment => "multimoment",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides `options.max_coeff_degree` of the problem file.
    pub max_degree: Option<usize>,
    /// Extra sample point, also used for the point class `c_p`.
    pub point: Option<Vec<Rational>>,
    pub exec: Exec,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    /// Canonical JSON of the artifact, if the command produced one.
    pub artifact: Option<String>,
}

pub fn run(command: &Command, problem_text: &str, opts: &RunOptions) -> RunOutput {
    let mut report = Report::new(command.name());
    let problem = match load(problem_text) {
        Ok(s) => s,
        Err(e) => {
            report.error(Status::Invalid, format!("problem file: {e}"));
            return RunOutput { report, artifact: None };
        }
    };
    let artifact = match &problem {
        AnyProblem::Euclidean(l) => dispatch(command, l, opts, &mut report),
        AnyProblem::Invariant(l) => dispatch(command, l, opts, &mut report),
    };
    RunOutput { report, artifact }
}

fn dispatch<C: Backend>(command: &Command, l: &Loaded<C>, opts: &RunOptions, report: &mut Report) -> Option<String> {
    let point = chosen_point(l, opts, report)?;
    let problem = validate(l, &point, report)?;
    match command {
        Command::Validate => None,
        Command::Obstruction => {
            obstruction(&problem, l, opts, &point, report);
            None
        }
        Command::Comoment => comoment(&problem, l, opts, &point, report),
        Command::Verify { artifact } => {
            verify(&problem, artifact, report);
            None
        }
        Command::Weak => weak(&problem, report),
        Command::Exact => exact(&problem, l, report),
        Command::Multimoment => multimoment(&problem, opts, report),
    }
}

fn chosen_point<C: Backend>(l: &Loaded<C>, opts: &RunOptions, report: &mut Report) -> Option<Vec<Rational>> {
    let base = l.backend.base_point();
    match &opts.point {
        None => Some(base),
        Some(_) if base.is_empty() => {
            report.line("note: --point is ignored on the invariant backend");
            Some(base)
        }
        Some(p) if p.len() != l.backend.dim() => {
            report.error(
                Status::Usage,
                format!(
                    "--point has {} coordinates, the backend has dimension {}",
                    p.len(),
                    l.backend.dim()
                ),
            );
            None
        }
        Some(p) => Some(p.clone()),
    }
}

fn field_list<C: Backend>(backend: &C, fields: &[C::Field]) -> String {
    fields
        .iter()
        .enumerate()
        .map(|(i, v)| format!("ζ(e{}) = {}", i + 1, backend.show_field(v)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Structure checks: Jacobi, closedness and degree of `omega`,
/// nondegeneracy at the sample points, and the action.
fn validate<C: Backend>(l: &Loaded<C>, point: &[Rational], report: &mut Report) -> Option<Problem<C>> {
    report.set("problem", "backend", json!(C::NAME));
    report.set("problem", "dim", json!(l.backend.dim()));
    report.set("problem", "lie_dim", json!(l.algebra.dim()));
    report.set("problem", "n", json!(l.n));
    report.line(format!(
        "problem: {} backend of dimension {}, Lie algebra of dimension {}, n = {}",
        C::NAME,
        l.backend.dim(),
        l.algebra.dim(),
        l.n
    ));
    let algebras = [
        ("lie_algebra", Some(&l.algebra)),
        ("backend_algebra", l.backend_algebra.as_ref()),
    ];
    for (key, alg) in algebras {
        let Some(alg) = alg else { continue };
        match alg.validate() {
            Ok(()) => report.verdict(key, json!(true), "ok"),
            Err(v) => {
                report.verdict(key, json!(false), v.to_string());
                report.fail(Status::Invalid);
            }
        }
    }
    if report.status() != Status::Ok {
        return None;
    }
    let problem = match Problem::new(l.backend.clone(), &l.algebra, l.omega.clone(), l.n, l.fields.clone()) {
        Ok(p) => p,
        Err(e) => {
            report.verdict("omega", json!(false), e.to_string());
            report.fail(Status::Invalid);
            return None;
        }
    };
    report.verdict("omega", json!(true), format!("closed of degree {}", l.n + 1));

    let mut points = l.sample_points.clone();
    if !points.iter().any(|p| p.as_slice() == point) {
        points.push(point.to_vec());
    }
    match nondegeneracy_check(problem.backend(), problem.omega(), &points) {
        Ok(verdicts) => {
            let good = verdicts.iter().filter(|v| v.nondegenerate).count();
            let all = good == verdicts.len();
            let entries: Vec<Value> = verdicts
                .iter()
                .map(|v| json!({"point": rats(&v.point), "rank": v.rank, "nondegenerate": v.nondegenerate}))
                .collect();
            report.verdict(
                "n_plectic",
                json!({"all": all, "points": entries}),
                format!(
                    "{} at {good}/{} sample points",
                    if all { "yes" } else { "no" },
                    verdicts.len()
                ),
            );
            for v in &verdicts {
                if !v.point.is_empty() {
                    report.line(format!("  rank {} at {}", v.rank, show_vector(&v.point)));
                }
            }
        }
        Err(e) => {
            report.error(Status::Invalid, format!("sample points: {e}"));
            return None;
        }
    }

    let action = problem.validate_action();
    if action.is_ok() {
        report.verdict("action_valid", json!(true), "ok");
        report.line(format!("  {}", field_list(problem.backend(), problem.fields())));
        Some(problem)
    } else {
        let backend = problem.backend();
        let details: Vec<String> = action
            .defects
            .iter()
            .map(|d| match d {
                ActionDefect::Bracket { i, j, residual } => format!(
                    "ζ[e{0}, e{1}] − [ζe{0}, ζe{1}] = {2}",
                    i + 1,
                    j + 1,
                    backend.show_field(residual)
                ),
                ActionDefect::NotSymplectic { i, residual } => {
                    format!("ℒ_ζ(e{}) omega = {}", i + 1, show_form(backend, residual))
                }
            })
            .collect();
        report.verdict("action_valid", json!(false), format!("{} defect(s)", details.len()));
        for d in &details {
            report.line(format!("  {d}"));
        }
        report.set("action", "defects", json!(details));
        report.fail(Status::Invalid);
        None
    }
}

fn bigraded_value<C: Backend>(backend: &C, b: &Bigraded<C::Key>) -> Value {
    serde_json::to_value(encode_bigraded(backend, b)).expect("serializes")
}

fn level_value<C: Backend>(backend: &C, level: &ObstructionLevel<C::Key>) -> Value {
    json!({
        "k": level.k,
        "lie_cohomology_dim": level.lie_dim,
        "de_rham_dim": level.de_rham_dim,
        "coordinates": level.coordinates.iter().map(|r| rats(r)).collect::<Vec<_>>(),
        "nonzero": level.nonzero,
        "representative": bigraded_value(backend, &level.representative),
    })
}

fn level_line<C: Backend>(n: usize, level: &ObstructionLevel<C::Key>) -> String {
    let head = format!(
        "h_{}: {}  (dim H^{}(g) = {}, dim H^{}_dR = {})",
        level.k,
        if level.nonzero { "nonzero" } else { "0" },
        level.k,
        level.lie_dim,
        n + 1 - level.k,
        level.de_rham_dim
    );
    if level.nonzero {
        let rows: Vec<String> = level.coordinates.iter().map(|r| show_vector(r)).collect();
        format!("{head}  coordinates [{}]", rows.join(", "))
    } else {
        head
    }
}

fn write_obstruction<C: Backend>(report: &mut Report, backend: &C, rep: &ObstructionReport<C::Key>) {
    let levels: Vec<Value> = rep.levels.iter().map(|l| level_value(backend, l)).collect();
    report.set("obstruction", "levels", Value::Array(levels));
    for level in &rep.levels {
        report.line(level_line::<C>(rep.n, level));
    }
    let pc = &rep.point_class;
    report.set(
        "obstruction",
        "point_class",
        json!({"point": rats(&pc.point), "values": rats(&pc.values), "class": rats(&pc.class), "nonzero": pc.nonzero}),
    );
    let at = if pc.point.is_empty() {
        "at the identity".to_string()
    } else {
        format!("at {}", show_vector(&pc.point))
    };
    report.line(format!(
        "c_p {at}: values {} class {} {}",
        show_vector(&pc.values),
        show_vector(&pc.class),
        if pc.nonzero { "nonzero" } else { "zero" }
    ));
}

fn solver_options<C: Backend>(l: &Loaded<C>, opts: &RunOptions) -> SolverOptions {
    SolverOptions {
        max_coeff_degree: opts.max_degree.or(l.max_coeff_degree),
        exec: opts.exec,
        column_seed: None,
    }
}

fn obstruction<C: Backend>(
    problem: &Problem<C>,
    l: &Loaded<C>,
    opts: &RunOptions,
    point: &[Rational],
    report: &mut Report,
) {
    let rep = match problem.build_g().and_then(|g| obstruction_report(problem, &g, point)) {
        Ok(r) => r,
        Err(e) => return report.error(Status::Invalid, e.to_string()),
    };
    write_obstruction(report, problem.backend(), &rep);

    let weak_exists = match weak_comoment(problem) {
        Ok(r) => r.is_ok(),
        Err(e) => return report.error(Status::Invalid, e.to_string()),
    };
    report.verdict(
        "weak",
        json!(if weak_exists { "exists" } else { "obstructed" }),
        if weak_exists { "exists" } else { "obstructed" },
    );

    let solved = match solve_comoment(problem, &solver_options(l, opts)) {
        Ok(s) => s,
        Err(e) => return report.error(Status::Invalid, e.to_string()),
    };
    let (strong, status) = match &solved.outcome {
        Outcome::Exists(_) => ("exists", Status::Ok),
        Outcome::Obstructed(_) => ("obstructed", Status::Obstructed),
        Outcome::Inconclusive(_) => ("inconclusive", Status::Inconclusive),
    };
    report.verdict(
        "strong",
        json!(strong),
        format!("{strong} (coefficient bound {})", solved.bound),
    );
    report.set("solver", "bound", json!(solved.bound));

    match multimoment_construct(problem, opts.exec) {
        Ok(Ok(_)) => report.verdict("multimoment", json!("exists"), "exists"),
        Ok(Err(f)) => report.verdict(
            "multimoment",
            json!("obstructed"),
            format!("obstructed (h_{} ≠ 0)", f.k),
        ),
        Err(e) => return report.error(Status::Invalid, e.to_string()),
    }

    if strong == "exists" && (!weak_exists || rep.any_nonzero()) {
        report.error(
            Status::VerificationFailed,
            "inconsistent verdicts: strong co-moment with a nonzero class",
        );
    }
    report.fail(status);
}

fn write_comoment<C: Backend>(report: &mut Report, backend: &C, map: &ComomentMap<C::Field, C::Key>) {
    for k in 1..=map.n() {
        let comp = map.component(k);
        if comp.is_zero() {
            report.line(format!("f_{k} = 0"));
        }
        for (set, a) in comp.coeffs() {
            report.line(format!("f_{k}({}) = {}", wedge_label(*set), show_form(backend, a)));
        }
    }
    let art = encode_comoment(backend, map);
    report.set("artifacts", "comoment", serde_json::to_value(&art).expect("serializes"));
}

fn comoment<C: Backend>(
    problem: &Problem<C>,
    l: &Loaded<C>,
    opts: &RunOptions,
    point: &[Rational],
    report: &mut Report,
) -> Option<String> {
    let solved = match solve_comoment(problem, &solver_options(l, opts)) {
        Ok(s) => s,
        Err(e) => {
            report.error(Status::Invalid, e.to_string());
            return None;
        }
    };
    report.set("solver", "bound", json!(solved.bound));
    match solved.outcome {
        Outcome::Exists(map) => {
            report.verdict(
                "strong",
                json!("exists"),
                format!("exists (coefficient bound {})", solved.bound),
            );
            write_comoment(report, problem.backend(), &map);
            Some(canonical_json(&encode_comoment(problem.backend(), &map)))
        }
        Outcome::Obstructed(_) | Outcome::Inconclusive(_) => {
            let inconclusive = matches!(solved.outcome, Outcome::Inconclusive(_));
            let rep = match problem.build_g().and_then(|g| obstruction_report(problem, &g, point)) {
                Ok(r) => r,
                Err(e) => {
                    report.error(Status::Invalid, e.to_string());
                    return None;
                }
            };
            write_obstruction(report, problem.backend(), &rep);
            if inconclusive {
                report.verdict(
                    "strong",
                    json!("inconclusive"),
                    format!("inconclusive: no potential with coefficient degree ≤ {}", solved.bound),
                );
                report.fail(Status::Inconclusive);
            } else {
                report.verdict("strong", json!("obstructed"), "obstructed");
                report.fail(Status::Obstructed);
            }
            None
        }
    }
}

fn show_observable<C: Backend>(backend: &C, o: &Observable<C::Field, C::Key>) -> String {
    match o {
        Observable::Pair { field, form } => format!("({}, {})", backend.show_field(field), show_form(backend, form)),
        Observable::Form { form, .. } => show_form(backend, form),
    }
}

fn report_defect<C: Backend>(report: &mut Report, backend: &C, defect: &MorphismDefect<C::Field, C::Key>) {
    let text = match defect {
        MorphismDefect::VectorPart { i } => format!("vector part of f_1(e{0}) differs from ζ(e{0})", i + 1),
        MorphismDefect::Pairing { i, residual } => format!(
            "f_1(e{}) is not an observable; residual {}",
            i + 1,
            show_form(backend, residual)
        ),
        MorphismDefect::Relation { k, set, residual } => format!(
            "morphism relation at level {k} fails on {}; residual {}",
            wedge_label(*set),
            show_observable(backend, residual)
        ),
        MorphismDefect::Shape(s) => format!("malformed co-moment: {s}"),
    };
    report.verdict("comoment_verified", json!(false), text);
    report.fail(Status::VerificationFailed);
}

fn verify<C: Backend>(problem: &Problem<C>, text: &str, report: &mut Report) {
    let art: ComomentArtifact = match parse_json(text) {
        Ok(a) => a,
        Err(e) => return report.error(Status::Invalid, format!("comoment file: {e}")),
    };
    let map = match decode_comoment(problem.backend(), &art) {
        Ok(m) => m,
        Err(e) => return report.error(Status::Invalid, format!("comoment file: {e}")),
    };
    if map.n() != problem.n() || map.fields().len() != problem.lie_dim() {
        report.verdict(
            "comoment_verified",
            json!(false),
            format!(
                "co-moment has n = {} and {} generators, the problem has n = {} and {}",
                map.n(),
                map.fields().len(),
                problem.n(),
                problem.lie_dim()
            ),
        );
        return report.fail(Status::VerificationFailed);
    }
    match map.verify(problem) {
        Ok(()) => report.verdict("comoment_verified", json!(true), "ok"),
        Err(d) => report_defect(report, problem.backend(), &d),
    }
}

fn weak<C: Backend>(problem: &Problem<C>, report: &mut Report) -> Option<String> {
    let backend = problem.backend();
    match weak_comoment(problem) {
        Ok(Ok(w)) => {
            report.verdict("weak", json!("exists"), "exists");
            for (i, a) in w.forms.iter().enumerate() {
                report.line(format!("j(e{}) = {}", i + 1, show_form(backend, a)));
            }
            let art = encode_weak(backend, problem.n(), &w);
            report.set("artifacts", "weak", serde_json::to_value(&art).expect("serializes"));
            match covariant_obstruction(problem, &w) {
                Ok(c) => {
                    report.verdict(
                        "covariant",
                        json!(if c.exists { "exists" } else { "obstructed" }),
                        if c.exists {
                            "exists (h_2 = 0)"
                        } else {
                            "obstructed (h_2 ≠ 0)"
                        },
                    );
                    report.line(level_line::<C>(problem.n(), &c.h2));
                    report.set("obstruction", "covariant_h2", level_value(backend, &c.h2));
                }
                Err(e) => report.error(Status::Invalid, e.to_string()),
            }
            Some(canonical_json(&art))
        }
        Ok(Err(obs)) => {
            report.verdict("weak", json!("obstructed"), "obstructed");
            for (i, c) in obs.classes.iter().enumerate() {
                report.line(format!("[g_1(e{})] = {}", i + 1, show_vector(c)));
            }
            report.set(
                "obstruction",
                "weak_classes",
                Value::Array(obs.classes.iter().map(|c| rats(c)).collect()),
            );
            report.fail(Status::Obstructed);
            None
        }
        Err(e) => {
            report.error(Status::Invalid, e.to_string());
            None
        }
    }
}

fn exact<C: Backend>(problem: &Problem<C>, l: &Loaded<C>, report: &mut Report) -> Option<String> {
    let backend = problem.backend();
    let Some(eta) = &l.eta else {
        report.error(
            Status::Invalid,
            "eta: missing; the exact construction needs an invariant potential",
        );
        return None;
    };
    match exact_comoment(problem, eta) {
        Ok(map) => {
            report.verdict("exact", json!("exists"), "exists (verified)");
            write_comoment(report, backend, &map);
            match universal_momentum_report(backend, eta, problem.fields()) {
                Ok(entries) => {
                    for (i, e) in entries.iter().enumerate() {
                        report.line(format!("J(ζe{}) = ι η = {}", i + 1, show_form(backend, &e.j)));
                    }
                    let holds = universal_identity_holds(&map, &entries);
                    report.verdict("universal_identity", json!(holds), if holds { "ok" } else { "fails" });
                }
                Err(e) => report.error(Status::Invalid, e.to_string()),
            }
            Some(canonical_json(&encode_comoment(backend, &map)))
        }
        Err(ExactError::NotPotential { residual }) => {
            report.error(
                Status::Invalid,
                format!("eta: d eta ≠ omega; d eta − omega = {}", show_form(backend, &residual)),
            );
            None
        }
        Err(ExactError::NotInvariant { i, residual }) => {
            report.error(
                Status::Invalid,
                format!(
                    "eta: not invariant under e{}; ℒ eta = {}",
                    i + 1,
                    show_form(backend, &residual)
                ),
            );
            None
        }
        Err(ExactError::Verification(d)) => {
            report_defect(report, backend, &d);
            None
        }
        Err(ExactError::Moment(e)) => {
            report.error(Status::Invalid, e.to_string());
            None
        }
    }
}

fn chain_text(chain: &hcomoment::liealg::Chain, lie_dim: usize) -> String {
    let basis = hcomoment::foundation::SubsetBasis::new(lie_dim, chain.degree);
    show_terms(
        chain
            .coeffs
            .iter()
            .enumerate()
            .map(|(pos, c)| (vec![wedge_label(basis.get(pos))], c.clone())),
    )
}

fn write_multimoment<C: Backend>(report: &mut Report, backend: &C, lie_dim: usize, mm: &MultiMomentMap<C::Key>) {
    if mm.basis.is_empty() {
        report.line(format!("P_g = 0 in degree {}", mm.n));
    }
    for (q, v) in mm.basis.iter().zip(&mm.values) {
        report.line(format!("v̄({}) = {}", chain_text(q, lie_dim), show_form(backend, v)));
    }
    let basis: Vec<Value> = mm
        .basis
        .iter()
        .map(|c| serde_json::to_value(encode_chain(c, lie_dim)).expect("serializes"))
        .collect();
    report.set("multimoment", "basis", Value::Array(basis));
    let values: Vec<Value> = mm
        .values
        .iter()
        .map(|v| serde_json::to_value(encode_form(backend, v)).expect("serializes"))
        .collect();
    report.set("multimoment", "values", Value::Array(values));
}

fn multimoment<C: Backend>(problem: &Problem<C>, opts: &RunOptions, report: &mut Report) -> Option<String> {
    let backend = problem.backend();
    let lie_dim = problem.lie_dim();
    match multimoment_construct(problem, opts.exec) {
        Ok(Ok(mm)) => {
            write_multimoment(report, backend, lie_dim, &mm);
            match multimoment_verify(problem, &mm) {
                Ok(Ok(())) => report.verdict("multimoment", json!("exists"), "exists (conditions (i) and (ii) hold)"),
                Ok(Err(d)) => {
                    let text = match d {
                        MultimomentDefect::ConditionI { index, residual } => {
                            format!("d v̄(p{}) ≠ ι ω; residual {}", index + 1, show_form(backend, &residual))
                        }
                        MultimomentDefect::ConditionII { i, index, residual } => format!(
                            "v̄(ad_e{} p{}) ≠ ℒ v̄; residual {}",
                            i + 1,
                            index + 1,
                            show_form(backend, &residual)
                        ),
                        MultimomentDefect::NotInvariant { i, index } => {
                            format!("ad_e{} p{} leaves P_g", i + 1, index + 1)
                        }
                        MultimomentDefect::Shape(s) => s,
                    };
                    report.verdict("multimoment", json!("invalid"), text);
                    report.fail(Status::VerificationFailed);
                }
                Err(e) => report.error(Status::Invalid, e.to_string()),
            }
            let art = encode_multimoment(backend, lie_dim, &mm);
            Some(canonical_json(&art))
        }
        Ok(Err(f)) => {
            report.verdict(
                "multimoment",
                json!("obstructed"),
                format!("obstructed (h_{} ≠ 0)", f.k),
            );
            report.line(level_line::<C>(problem.n(), &f.level));
            report.set(
                "obstruction",
                "levels",
                Value::Array(vec![level_value(backend, &f.level)]),
            );
            report.fail(Status::Obstructed);
            None
        }
        Err(e) => {
            report.error(Status::Invalid, e.to_string());
            None
        }
    }
}
