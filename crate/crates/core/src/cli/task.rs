use serde_json::{json, Map, Value};

use crate::catalog::{
    correspondence_table, reference_report, verify_einstein, verify_hamiltonian,
    verify_hamiltonian_corrupted, verify_maxwell, EinsteinSource, VerificationReport,
};
use crate::connection::{
    covariant_derivative_1form, christoffel, evolutionary_commutator, ricci_and_scalar, riemann,
    torsion, torsion_witness, Connection, Curvature, Tensor, Variance,
};
use crate::error::Error;
use crate::exterior::{
    classify_closure, ext_d, interior_product, linear_combine, pullback, wedge, ClosureStatus,
    Form, SubmanifoldMap, VectorField,
};
use crate::geometry::{build_em_form, codifferential, hodge, maxwell_residual, Metric};
use crate::symbolic::matrix::Matrix;
use crate::symbolic::{
    antiderivative, diff, eval_at, is_zero, simplify, synthetic_table, Assignment, Chart, Expr,
    SamplingPolicy, ZeroTest,
};
use crate::transform::{
    flow_check_with, hamilton_field, inverse_legendre, integrating_factor, jacobian_degeneracy,
    legendre, poincare_cartan, poisson_bracket, reversed_force_field, HamiltonianSystem,
    PhaseSpace, QuadraticLagrangian,
};

use super::scenario::{invalid, make_chart, InputError, RawTask, Scenario};

/// Every task kind a scenario may request.
pub const TASK_OPS: &[&str] = &[
    "simplify",
    "diff",
    "is_zero",
    "eval",
    "antiderivative",
    "wedge",
    "ext_d",
    "linear_combine",
    "pullback",
    "interior_product",
    "classify_closure",
    "hodge",
    "codifferential",
    "build_em_form",
    "maxwell_residual",
    "christoffel",
    "torsion",
    "covariant_derivative",
    "evolutionary_commutator",
    "torsion_witness",
    "riemann",
    "ricci",
    "einstein_tensor",
    "bianchi_residual",
    "legendre",
    "inverse_legendre",
    "poisson_bracket",
    "jacobian_degeneracy",
    "integrating_factor",
    "poincare_cartan",
    "hamilton_flow_check",
    "verify_maxwell",
    "verify_hamiltonian",
    "verify_einstein",
    "correspondence_table",
    "reference",
];

#[derive(Debug)]
enum Op {
    Simplify(Expr),
    Diff(Expr, String),
    IsZero(Expr),
    Eval(Expr, Assignment),
    Antiderivative(Expr, String),
    Wedge(Form, Form),
    ExtD(Form),
    LinearCombine(Vec<Expr>, Vec<Form>),
    Pullback(SubmanifoldMap, Form),
    InteriorProduct(VectorField, Form),
    ClassifyClosure(Form),
    Hodge(Form, Metric),
    Codifferential(Form, Metric),
    BuildEmForm([Expr; 3], [Expr; 3], Chart),
    MaxwellResidual([Expr; 3], [Expr; 3], Form, Metric),
    Christoffel(Metric),
    Torsion(Connection),
    CovariantDerivative(Form, Connection),
    EvolutionaryCommutator(Form, Connection),
    TorsionWitness(Connection),
    Riemann(Connection),
    Ricci(Connection, Metric),
    EinsteinTensor(Metric),
    BianchiResidual(Metric),
    Legendre(QuadraticLagrangian),
    InverseLegendre(HamiltonianSystem),
    PoissonBracket(PhaseSpace, Expr, Expr),
    JacobianDegeneracy(SubmanifoldMap),
    IntegratingFactor(Form),
    PoincareCartan(HamiltonianSystem),
    HamiltonFlowCheck(HamiltonianSystem, bool),
    VerifyMaxwell([Expr; 3], [Expr; 3], Form, Metric),
    VerifyHamiltonian(HamiltonianSystem, bool),
    VerifyEinstein(Metric, Option<EinsteinSource>),
    CorrespondenceTable,
    Reference(String, bool),
}

/// A validated task ready to run.
#[derive(Debug)]
pub struct Task {
    pub index: usize,
    pub op_name: String,
    pub label: Option<String>,
    pub expect: Option<String>,
    op: Op,
}

/// Result of running one task.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: String,
    pub details: Map<String, Value>,
}

struct Args<'a> {
    context: String,
    map: &'a Map<String, Value>,
    sc: &'a Scenario,
}

impl<'a> Args<'a> {
    fn allow(&self, keys: &[&str]) -> Result<(), InputError> {
        for k in self.map.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(invalid(format!("{}: unexpected argument `{k}`", self.context)));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Result<&'a Value, InputError> {
        self.map
            .get(key)
            .ok_or_else(|| invalid(format!("{}: missing argument `{key}`", self.context)))
    }

    fn string(&self, key: &str) -> Result<&'a str, InputError> {
        self.raw(key)?
            .as_str()
            .ok_or_else(|| invalid(format!("{}: `{key}` must be a string", self.context)))
    }

    fn strings(&self, key: &str) -> Result<Vec<String>, InputError> {
        let err = || invalid(format!("{}: `{key}` must be a list of strings", self.context));
        self.raw(key)?
            .as_array()
            .ok_or_else(err)?
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(err))
            .collect()
    }

    fn flag(&self, key: &str) -> Result<bool, InputError> {
        match self.map.get(key) {
            None => Ok(false),
            Some(v) => v
                .as_bool()
                .ok_or_else(|| invalid(format!("{}: `{key}` must be true or false", self.context))),
        }
    }

    /// Chart for this task: the `chart` argument, else the scenario chart.
    fn chart(&self) -> Result<Chart, InputError> {
        match self.map.get("chart") {
            Some(_) => make_chart(&self.strings("chart")?, &format!("{}.chart", self.context)),
            None => Ok(self.sc.chart.clone()),
        }
    }

    fn expr_in(&self, key: &str, chart: &Chart) -> Result<Expr, InputError> {
        let text = self.string(key)?;
        self.sc.expr(text, chart, &format!("{}.{key}", self.context))
    }

    fn exprs_in(&self, key: &str, chart: &Chart) -> Result<Vec<Expr>, InputError> {
        self.strings(key)?
            .iter()
            .enumerate()
            .map(|(i, s)| self.sc.expr(s, chart, &format!("{}.{key}[{i}]", self.context)))
            .collect()
    }

    fn triple(&self, key: &str, chart: &Chart) -> Result<[Expr; 3], InputError> {
        let v = self.exprs_in(key, chart)?;
        <[Expr; 3]>::try_from(v).map_err(|_| invalid(format!("{}: `{key}` needs 3 entries", self.context)))
    }

    fn matrix_in(&self, key: &str, chart: &Chart) -> Result<Matrix, InputError> {
        let err = || invalid(format!("{}: `{key}` must be a list of lists of strings", self.context));
        let rows = self.raw(key)?.as_array().ok_or_else(err)?;
        rows.iter()
            .enumerate()
            .map(|(i, row)| {
                row.as_array()
                    .ok_or_else(err)?
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let text = v.as_str().ok_or_else(err)?;
                        self.sc.expr(text, chart, &format!("{}.{key}[{i}][{j}]", self.context))
                    })
                    .collect()
            })
            .collect()
    }

    fn form(&self, key: &str) -> Result<Form, InputError> {
        let name = self.string(key)?;
        self.sc
            .forms
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(format!("{}: unknown form `{name}`", self.context)))
    }

    fn map_named(&self, key: &str) -> Result<SubmanifoldMap, InputError> {
        let name = self.string(key)?;
        self.sc
            .maps
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(format!("{}: unknown map `{name}`", self.context)))
    }

    fn field(&self, key: &str) -> Result<VectorField, InputError> {
        let name = self.string(key)?;
        self.sc
            .fields
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(format!("{}: unknown vector field `{name}`", self.context)))
    }

    fn metric(&self) -> Result<Metric, InputError> {
        self.sc
            .metric
            .clone()
            .ok_or_else(|| invalid(format!("{}: scenario declares no metric", self.context)))
    }

    /// `connection: "scenario" | "christoffel"`; defaults to the scenario
    /// connection when one is declared.
    fn connection(&self) -> Result<Connection, InputError> {
        let choice = match self.map.get("connection") {
            Some(_) => self.string("connection")?,
            None if self.sc.connection.is_some() => "scenario",
            None => "christoffel",
        };
        match choice {
            "scenario" => self
                .sc
                .connection
                .clone()
                .ok_or_else(|| invalid(format!("{}: scenario declares no connection", self.context))),
            "christoffel" => Ok(christoffel(&self.metric()?)),
            other => Err(invalid(format!(
                "{}: connection must be \"scenario\" or \"christoffel\", got `{other}`",
                self.context
            ))),
        }
    }

    fn current(&self, chart: &Chart) -> Result<Form, InputError> {
        match self.map.get("J") {
            Some(_) => {
                let j = self.form("J")?;
                if j.degree() != 1 || j.chart() != chart {
                    return Err(invalid(format!("{}: J must be a 1-form on the scenario chart", self.context)));
                }
                Ok(j)
            }
            None => Ok(Form::zero(chart, 1)),
        }
    }

    fn phase_space(&self) -> Result<PhaseSpace, InputError> {
        let positions = self.strings("positions")?;
        let momenta = self.strings("momenta")?;
        let space = match self.map.get("time") {
            Some(_) => PhaseSpace::with_time(self.string("time")?, &positions, &momenta),
            None => PhaseSpace::new(&positions, &momenta),
        };
        space.map_err(|e| invalid(format!("{}: {e}", self.context)))
    }

    fn hamiltonian(&self) -> Result<HamiltonianSystem, InputError> {
        let space = self.phase_space()?;
        let h = self.expr_in("hamiltonian", space.chart())?;
        Ok(HamiltonianSystem::new(space, h))
    }

    fn lagrangian(&self) -> Result<QuadraticLagrangian, InputError> {
        let positions = self.strings("positions")?;
        let velocities = self.strings("velocities")?;
        let names: Vec<String> = positions.iter().chain(&velocities).cloned().collect();
        let chart = make_chart(&names, &self.context)?;
        let wrap = |e: Error| invalid(format!("{}: {e}", self.context));
        let mut l = QuadraticLagrangian::new(&positions, &velocities, self.matrix_in("mass", &chart)?).map_err(wrap)?;
        if self.map.contains_key("momenta") {
            l = l.with_momenta(&self.strings("momenta")?).map_err(wrap)?;
        }
        if self.map.contains_key("linear") {
            l = l.with_linear(self.exprs_in("linear", &chart)?).map_err(wrap)?;
        }
        if self.map.contains_key("potential") {
            l = l.with_potential(self.expr_in("potential", &chart)?).map_err(wrap)?;
        }
        Ok(l)
    }
}

const HAMILTONIAN_KEYS: [&str; 4] = ["time", "positions", "momenta", "hamiltonian"];

fn with<'k>(base: &[&'k str], extra: &[&'k str]) -> Vec<&'k str> {
    base.iter().chain(extra).copied().collect()
}

impl Task {
    pub(crate) fn prepare(index: usize, raw: &RawTask, sc: &Scenario) -> Result<Task, InputError> {
        let label = raw.label.clone();
        let context = format!(
            "tasks[{index}]{}",
            label.as_deref().map(|l| format!(" ({l})")).unwrap_or_default()
        );
        let a = Args {
            context,
            map: &raw.args,
            sc,
        };
        let op = match raw.op.as_str() {
            "simplify" | "is_zero" => {
                a.allow(&["expr", "chart"])?;
                let e = a.expr_in("expr", &a.chart()?)?;
                if raw.op == "simplify" {
                    Op::Simplify(e)
                } else {
                    Op::IsZero(e)
                }
            }
            "diff" | "antiderivative" => {
                a.allow(&["expr", "var", "chart"])?;
                let chart = a.chart()?;
                let var = a.string("var")?.to_string();
                if chart.index_of(&var).is_none() {
                    return Err(invalid(format!("{}: `{var}` is not a coordinate", a.context)));
                }
                let e = a.expr_in("expr", &chart)?;
                if raw.op == "diff" {
                    Op::Diff(e, var)
                } else {
                    Op::Antiderivative(e, var)
                }
            }
            "eval" => {
                a.allow(&["expr", "at", "chart"])?;
                let e = a.expr_in("expr", &a.chart()?)?;
                let err = || invalid(format!("{}: `at` must map names to numbers", a.context));
                let at = a
                    .raw("at")?
                    .as_object()
                    .ok_or_else(err)?
                    .iter()
                    .map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)).ok_or_else(err))
                    .collect::<Result<Assignment, _>>()?;
                Op::Eval(e, at)
            }
            "wedge" => {
                a.allow(&["a", "b"])?;
                Op::Wedge(a.form("a")?, a.form("b")?)
            }
            "ext_d" | "classify_closure" | "integrating_factor" => {
                a.allow(&["form"])?;
                let f = a.form("form")?;
                match raw.op.as_str() {
                    "ext_d" => Op::ExtD(f),
                    "classify_closure" => Op::ClassifyClosure(f),
                    _ => Op::IntegratingFactor(f),
                }
            }
            "linear_combine" => {
                a.allow(&["coeffs", "forms"])?;
                let names = a.strings("forms")?;
                let forms = names
                    .iter()
                    .map(|n| {
                        sc.forms
                            .get(n)
                            .cloned()
                            .ok_or_else(|| invalid(format!("{}: unknown form `{n}`", a.context)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let chart = forms.first().map(|f| f.chart().clone()).unwrap_or_else(|| sc.chart.clone());
                Op::LinearCombine(a.exprs_in("coeffs", &chart)?, forms)
            }
            "pullback" => {
                a.allow(&["map", "form"])?;
                Op::Pullback(a.map_named("map")?, a.form("form")?)
            }
            "interior_product" => {
                a.allow(&["field", "form"])?;
                Op::InteriorProduct(a.field("field")?, a.form("form")?)
            }
            "hodge" | "codifferential" => {
                a.allow(&["form"])?;
                let (f, g) = (a.form("form")?, a.metric()?);
                if raw.op == "hodge" {
                    Op::Hodge(f, g)
                } else {
                    Op::Codifferential(f, g)
                }
            }
            "build_em_form" => {
                a.allow(&["E", "B"])?;
                Op::BuildEmForm(a.triple("E", &sc.chart)?, a.triple("B", &sc.chart)?, sc.chart.clone())
            }
            "maxwell_residual" | "verify_maxwell" => {
                a.allow(&["E", "B", "J"])?;
                let e = a.triple("E", &sc.chart)?;
                let b = a.triple("B", &sc.chart)?;
                let j = a.current(&sc.chart)?;
                if raw.op == "maxwell_residual" {
                    Op::MaxwellResidual(e, b, j, a.metric()?)
                } else {
                    Op::VerifyMaxwell(e, b, j, a.metric()?)
                }
            }
            "christoffel" | "einstein_tensor" | "bianchi_residual" => {
                a.allow(&[])?;
                let g = a.metric()?;
                match raw.op.as_str() {
                    "christoffel" => Op::Christoffel(g),
                    "einstein_tensor" => Op::EinsteinTensor(g),
                    _ => Op::BianchiResidual(g),
                }
            }
            "torsion" | "torsion_witness" | "riemann" => {
                a.allow(&["connection"])?;
                let c = a.connection()?;
                match raw.op.as_str() {
                    "torsion" => Op::Torsion(c),
                    "torsion_witness" => Op::TorsionWitness(c),
                    _ => Op::Riemann(c),
                }
            }
            "ricci" => {
                a.allow(&["connection"])?;
                Op::Ricci(a.connection()?, a.metric()?)
            }
            "covariant_derivative" | "evolutionary_commutator" => {
                a.allow(&["form", "connection"])?;
                let (f, c) = (a.form("form")?, a.connection()?);
                if raw.op == "covariant_derivative" {
                    Op::CovariantDerivative(f, c)
                } else {
                    Op::EvolutionaryCommutator(f, c)
                }
            }
            "legendre" => {
                a.allow(&["positions", "velocities", "momenta", "mass", "linear", "potential"])?;
                Op::Legendre(a.lagrangian()?)
            }
            "inverse_legendre" | "poincare_cartan" => {
                a.allow(&HAMILTONIAN_KEYS)?;
                let sys = a.hamiltonian()?;
                if raw.op == "inverse_legendre" {
                    Op::InverseLegendre(sys)
                } else {
                    Op::PoincareCartan(sys)
                }
            }
            "hamilton_flow_check" | "verify_hamiltonian" => {
                a.allow(&with(&HAMILTONIAN_KEYS, &["corrupt"]))?;
                let (sys, corrupt) = (a.hamiltonian()?, a.flag("corrupt")?);
                if raw.op == "hamilton_flow_check" {
                    Op::HamiltonFlowCheck(sys, corrupt)
                } else {
                    Op::VerifyHamiltonian(sys, corrupt)
                }
            }
            "poisson_bracket" => {
                a.allow(&["positions", "momenta", "f", "g"])?;
                let space = a.phase_space()?;
                let f = a.expr_in("f", space.chart())?;
                let g = a.expr_in("g", space.chart())?;
                Op::PoissonBracket(space, f, g)
            }
            "jacobian_degeneracy" => {
                a.allow(&["map"])?;
                Op::JacobianDegeneracy(a.map_named("map")?)
            }
            "verify_einstein" => {
                a.allow(&["stress", "coupling"])?;
                let g = a.metric()?;
                let source = if a.map.contains_key("stress") {
                    let m = a.matrix_in("stress", &sc.chart)?;
                    let n = sc.chart.dim();
                    if m.len() != n || m.iter().any(|r| r.len() != n) {
                        return Err(invalid(format!("{}: stress must be {n}x{n}", a.context)));
                    }
                    let stress = Tensor::from_fn(&sc.chart, &[Variance::Lower; 2], |i| m[i[0]][i[1]].clone());
                    Some(EinsteinSource {
                        stress,
                        coupling: a.expr_in("coupling", &sc.chart)?,
                    })
                } else {
                    None
                };
                Op::VerifyEinstein(g, source)
            }
            "correspondence_table" => {
                a.allow(&[])?;
                Op::CorrespondenceTable
            }
            "reference" => {
                a.allow(&["verifier", "control"])?;
                let v = a.string("verifier")?;
                if !["maxwell", "hamiltonian", "einstein"].contains(&v) {
                    return Err(invalid(format!("{}: unknown verifier `{v}`", a.context)));
                }
                Op::Reference(v.to_string(), a.flag("control")?)
            }
            other => {
                return Err(invalid(format!("{}: unknown op `{other}`", a.context)));
            }
        };
        Ok(Task {
            index,
            op_name: raw.op.clone(),
            label,
            expect: raw.expect.clone(),
            op,
        })
    }

    pub fn run(&self, policy: &SamplingPolicy) -> Outcome {
        match execute(&self.op, policy) {
            Ok(outcome) => outcome,
            Err(e) => {
                let mut details = Map::new();
                details.insert("error".into(), json!(e.kind()));
                details.insert("message".into(), json!(e.to_string()));
                Outcome {
                    verdict: "Error".into(),
                    details,
                }
            }
        }
    }
}

fn form_json(f: &Form) -> Value {
    json!({
        "chart": f.chart().names(),
        "degree": f.degree(),
        "components": f.component_strings(),
    })
}

fn tensor_json(t: &Tensor) -> Value {
    let comps: Map<String, Value> = t
        .nonzero()
        .into_iter()
        .map(|(idx, e)| (crate::exterior::index_key(&idx), json!(e.to_string())))
        .collect();
    Value::Object(comps)
}

fn strings(exprs: &[Expr]) -> Value {
    json!(exprs.iter().map(Expr::to_string).collect::<Vec<_>>())
}

fn zero_verdict(z: ZeroTest) -> &'static str {
    match z {
        ZeroTest::Zero => "Pass",
        ZeroTest::NonZero => "Fail",
        ZeroTest::Unknown => "Unknown",
    }
}

fn computed(details: Map<String, Value>) -> Outcome {
    Outcome {
        verdict: "Computed".into(),
        details,
    }
}

fn single(key: &str, value: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert(key.into(), value);
    m
}

fn report_outcome(r: &VerificationReport) -> Outcome {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "residual": c.residual, "verdict": c.verdict}))
        .collect();
    let values: Map<String, Value> = r.values.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut details = Map::new();
    details.insert("scenario".into(), json!(r.scenario));
    details.insert("checks".into(), Value::Array(checks));
    if !values.is_empty() {
        details.insert("values".into(), Value::Object(values));
    }
    if !r.notes.is_empty() {
        details.insert("notes".into(), json!(r.notes));
    }
    Outcome {
        verdict: r.verdict().to_string(),
        details,
    }
}

fn execute(op: &Op, policy: &SamplingPolicy) -> Result<Outcome, Error> {
    Ok(match op {
        Op::Simplify(e) => computed(single("result", json!(simplify(e).to_string()))),
        Op::Diff(e, var) => computed(single("result", json!(diff(e, var).to_string()))),
        Op::IsZero(e) => {
            let z = is_zero(e, policy);
            Outcome {
                verdict: zero_verdict(z).into(),
                details: single("zero_test", json!(format!("{z:?}"))),
            }
        }
        Op::Eval(e, at) => {
            let table = synthetic_table(e, policy.seed);
            computed(single("value", json!(eval_at(e, at, &table)?)))
        }
        Op::Antiderivative(e, var) => match antiderivative(e, var) {
            Some(f) => computed(single("result", json!(f.to_string()))),
            None => Outcome {
                verdict: "Unsupported".into(),
                details: single("message", json!("integrand outside the antiderivative table")),
            },
        },
        Op::Wedge(a, b) => computed(single("form", form_json(&wedge(a, b)?))),
        Op::ExtD(a) => computed(single("form", form_json(&ext_d(a)))),
        Op::LinearCombine(c, f) => computed(single("form", form_json(&linear_combine(c, f)?))),
        Op::Pullback(phi, a) => computed(single("form", form_json(&pullback(phi, a)?))),
        Op::InteriorProduct(v, a) => computed(single("form", form_json(&interior_product(v, a)?))),
        Op::ClassifyClosure(a) => {
            let r = classify_closure(a, policy);
            let mut d = Map::new();
            d.insert("d_form".into(), form_json(&r.d_form));
            if let Some(p) = &r.potential {
                d.insert("potential".into(), form_json(p));
            }
            if let Some(k) = &r.commutator {
                d.insert("commutator".into(), form_json(k));
            }
            if r.uncertain {
                d.insert("uncertain".into(), json!(true));
            }
            Outcome {
                verdict: r.status.to_string(),
                details: d,
            }
        }
        Op::Hodge(a, g) => computed(single("form", form_json(&hodge(a, g)?))),
        Op::Codifferential(a, g) => computed(single("form", form_json(&codifferential(a, g)?))),
        Op::BuildEmForm(e, b, chart) => computed(single("form", form_json(&build_em_form(e, b, chart)?))),
        Op::MaxwellResidual(e, b, j, g) => {
            let f = build_em_form(e, b, g.chart())?;
            let (h, s) = maxwell_residual(&f, j, g)?;
            let verdict = ZeroTest::all([h.zero_test(policy), s.zero_test(policy)]);
            let mut d = Map::new();
            d.insert("dF".into(), form_json(&h));
            d.insert("d*F - *J".into(), form_json(&s));
            Outcome {
                verdict: zero_verdict(verdict).into(),
                details: d,
            }
        }
        Op::Christoffel(g) => computed(single("gamma", tensor_json(christoffel(g).coefficients()))),
        Op::Torsion(c) => computed(single("torsion", tensor_json(&torsion(c)))),
        Op::CovariantDerivative(a, c) => {
            computed(single("derivative", tensor_json(&covariant_derivative_1form(a, c)?)))
        }
        Op::EvolutionaryCommutator(a, c) => {
            let k = evolutionary_commutator(a, c)?;
            let mut d = single("commutator", form_json(&k));
            d.insert("d_form".into(), form_json(&ext_d(a)));
            computed(d)
        }
        Op::TorsionWitness(c) => match torsion_witness(c) {
            Some((a, k)) => {
                let mut d = single("form", form_json(&a));
                d.insert("d_form".into(), form_json(&ext_d(&a)));
                d.insert("commutator".into(), form_json(&k));
                computed(d)
            }
            None => computed(single("form", Value::Null)),
        },
        Op::Riemann(c) => computed(single("riemann", tensor_json(&riemann(c)))),
        Op::Ricci(c, g) => {
            let (ricci, scalar) = ricci_and_scalar(&riemann(c), g);
            let mut d = single("ricci", tensor_json(&ricci));
            d.insert("scalar".into(), json!(scalar.to_string()));
            computed(d)
        }
        Op::EinsteinTensor(g) => {
            let k = Curvature::of(g);
            let mut d = single("einstein", tensor_json(&k.einstein));
            d.insert("scalar".into(), json!(k.scalar.to_string()));
            computed(d)
        }
        Op::BianchiResidual(g) => {
            let r = Curvature::of(g).bianchi_residual(g);
            let z = ZeroTest::all(r.iter().map(|e| is_zero(e, policy)));
            Outcome {
                verdict: zero_verdict(z).into(),
                details: single("residual", strings(&r)),
            }
        }
        Op::Legendre(l) => {
            let (sys, rep) = legendre(l, policy)?;
            let mut d = single("hamiltonian", json!(sys.hamiltonian().to_string()));
            d.insert("determinant".into(), json!(rep.determinant.to_string()));
            d.insert("classification".into(), json!(rep.classification.to_string()));
            computed(d)
        }
        Op::InverseLegendre(sys) => {
            let l = inverse_legendre(sys, policy)?;
            let mass: Vec<Value> = l.mass().iter().map(|r| strings(r)).collect();
            let mut d = single("lagrangian", json!(l.lagrangian().to_string()));
            d.insert("velocities".into(), json!(l.velocities()));
            d.insert("mass".into(), Value::Array(mass));
            d.insert("linear".into(), strings(l.linear()));
            d.insert("potential".into(), json!(l.potential().to_string()));
            computed(d)
        }
        Op::PoissonBracket(space, f, g) => computed(single("result", json!(poisson_bracket(f, g, space).to_string()))),
        Op::JacobianDegeneracy(phi) => {
            let rep = jacobian_degeneracy(phi, policy)?;
            let mut d = single("determinant", json!(rep.determinant.to_string()));
            d.insert("classification".into(), json!(rep.classification.to_string()));
            computed(d)
        }
        Op::IntegratingFactor(w) => match integrating_factor(w, policy)? {
            Some(f) => {
                let mut d = single("mu", json!(f.mu.to_string()));
                d.insert("potential".into(), json!(f.potential.to_string()));
                let check = classify_closure(&w.scale(&f.mu), policy);
                d.insert("closure".into(), json!(check.status.to_string()));
                Outcome {
                    verdict: if check.status == ClosureStatus::Exact { "Exact" } else { "Fail" }.into(),
                    details: d,
                }
            }
            None => Outcome {
                verdict: "None".into(),
                details: single("message", json!("no integrating factor depending on one variable")),
            },
        },
        Op::PoincareCartan(sys) => computed(single("form", form_json(&poincare_cartan(sys)?))),
        Op::HamiltonFlowCheck(sys, corrupt) => {
            let field = if *corrupt {
                reversed_force_field(sys)?
            } else {
                hamilton_field(sys)?
            };
            let fc = flow_check_with(sys, field, policy)?;
            let mut d = single("field", strings(fc.field.components()));
            d.insert("residual".into(), form_json(&fc.residual));
            Outcome {
                verdict: zero_verdict(fc.verdict).into(),
                details: d,
            }
        }
        Op::VerifyMaxwell(e, b, j, g) => report_outcome(&verify_maxwell(e, b, j, g, policy)?),
        Op::VerifyHamiltonian(sys, corrupt) => report_outcome(&if *corrupt {
            verify_hamiltonian_corrupted(sys, policy)?
        } else {
            verify_hamiltonian(sys, policy)?
        }),
        Op::VerifyEinstein(g, src) => report_outcome(&verify_einstein(g, src.as_ref(), policy)?),
        Op::CorrespondenceTable => {
            let rows: Vec<Value> = correspondence_table()
                .iter()
                .map(|e| serde_json::to_value(e).expect("plain data"))
                .collect();
            computed(single("entries", Value::Array(rows)))
        }
        Op::Reference(v, control) => report_outcome(&reference_report(v, *control, policy)?),
    })
}

/// Verdicts that count as success when no expectation is declared.
pub fn is_success(verdict: &str) -> bool {
    matches!(verdict, "Pass" | "Closed" | "Exact" | "Computed")
}

/// Whether an outcome satisfies a declared expectation. `closed` accepts
/// exact forms; an expectation may also name a degeneracy classification or
/// an error kind.
pub fn meets_expectation(expect: &str, outcome: &Outcome) -> bool {
    let e = expect.to_ascii_lowercase();
    let v = outcome.verdict.to_ascii_lowercase();
    if e == v || (e == "closed" && v == "exact") {
        return true;
    }
    ["classification", "error"].iter().any(|k| {
        outcome.details.get(*k).and_then(Value::as_str).is_some_and(|s| {
            let s = s.to_ascii_lowercase();
            s == e || s.split('(').next() == Some(e.as_str())
        })
    })
}
