use serde::Serialize;
use serde_json::{json, Value};

use super::cache::hex;
use super::job::{CatKind, Command, CompareTarget, JobSpec, VerifyTarget};
use super::{CliError, RunStatus};
use crate::comparison::{self as cmp, ComparisonOptions, Status};
use crate::exactla::{Field, MatF};
use crate::fincat::{
    build_alt_cat, build_grassmann_cat, build_quad_cat, build_set_cat, build_vect_cat, check_axioms, Axiom, AxiomOutcome, FinCat, FormKind,
    Object, ObjData, QuadSpace, SetKind, Stabilization, VectClass,
};
use crate::funrep::{convolution_check, exponential_check, ExpFamily, FunctorExpr, LinRep, Variance};
use crate::grouphom::{build_group, group_homology, stable_scan, GModule, GroupKind, HomologyOptions, ScanOptions};
use crate::homalg::{bar_tor_oracle, tor_across_caps, ResolutionCache, ResolveOptions, Side, DEFAULT_BAR_MORPHISM_CAP};
use crate::mobius::{round_trip, verify_morita_gamma, verify_morita_spans};
use crate::predict::{char2_values, table, Char2Target, SeriesId};
use crate::spans::{build_span_cat, verify_psi, PsiChecks};

/// A finished computation before it is wrapped into a report.
pub struct Executed {
    pub status: RunStatus,
    pub result: Value,
    pub csv: Option<String>,
}

fn done(status: RunStatus, result: impl Serialize) -> Result<Executed, CliError> {
    Ok(Executed { status, result: serde_json::to_value(result).expect("results serialize"), csv: None })
}

fn pass_or_fail(passed: bool) -> RunStatus {
    if passed {
        RunStatus::Ok
    } else {
        RunStatus::Fail
    }
}

fn from_status(s: Status) -> RunStatus {
    match s {
        Status::Agree => RunStatus::Ok,
        Status::Inconclusive => RunStatus::Inconclusive,
        Status::Disagree => RunStatus::Fail,
    }
}

pub fn build_cat(kind: CatKind, field: Field, dmax: usize, cap: usize) -> Result<FinCat, CliError> {
    let vect = |class| build_vect_cat(field, dmax, class, cap);
    Ok(match kind {
        CatKind::All => vect(VectClass::All)?,
        CatKind::Inj => vect(VectClass::Inj)?,
        CatKind::Surj => vect(VectClass::Surj)?,
        CatKind::Iso => vect(VectClass::Iso)?,
        CatKind::Quad => build_quad_cat(field, dmax, true, cap)?,
        CatKind::QuadNondeg => build_quad_cat(field, dmax, false, cap)?,
        CatKind::Alt => build_alt_cat(field, dmax, true, cap)?,
        CatKind::AltNondeg => build_alt_cat(field, dmax, false, cap)?,
        CatKind::Gamma => build_set_cat(dmax, SetKind::Pointed)?,
        CatKind::Theta => build_set_cat(dmax, SetKind::Injections)?,
        CatKind::Omega => build_set_cat(dmax, SetKind::Surjections)?,
        CatKind::Sigma => build_set_cat(dmax, SetKind::Bijections)?,
        CatKind::Grassmann => build_grassmann_cat(field, dmax, cap)?,
        CatKind::SpanInj => build_span_cat(&vect(VectClass::Inj)?)?,
        CatKind::SpanTheta => build_span_cat(&build_set_cat(dmax, SetKind::Injections)?)?,
    })
}

/// `S(i) = A^{⊕i}` with `A` the hyperbolic plane for form categories and the
/// object of size one otherwise.
fn stabilization(cat: &FinCat, kind: CatKind, field: Field) -> Result<Stabilization, CliError> {
    let a = match kind {
        CatKind::Quad | CatKind::QuadNondeg | CatKind::Alt | CatKind::AltNondeg => {
            let form = if matches!(kind, CatKind::Quad | CatKind::QuadNondeg) { FormKind::Quadratic } else { FormKind::Alternating };
            cat.find_object(&Object::form(QuadSpace::hyperbolic(field, form)))
        }
        CatKind::Grassmann | CatKind::Omega => None,
        _ => cat.objects().iter().position(|o| o.size == 1),
    };
    let a = a.ok_or_else(|| CliError::Job(format!("{kind} has no stabilizing object within the cap")))?;
    Ok(Stabilization::by_sum(cat, 0, a)?)
}

fn covariant(expr: &FunctorExpr, cat: &FinCat, field: Field) -> Result<LinRep, CliError> {
    Ok(cmp::covariant(expr, cat, field)?)
}

fn contravariant(expr: &FunctorExpr, cat: &FinCat, field: Field) -> Result<LinRep, CliError> {
    Ok(cmp::contravariant(expr, cat, field)?)
}

fn comparison_options(job: &JobSpec) -> ComparisonOptions {
    let c = &job.caps;
    ComparisonOptions {
        n_max: c.n_max,
        // a comparison needs a cap ladder to observe convergence
        caps: if c.caps.is_empty() { (1..=c.dmax).collect() } else { c.caps.clone() },
        scan: scan_options(job),
        resolve: ResolveOptions::default(),
        morphism_cap: c.morphism_cap,
    }
}

fn scan_options(job: &JobSpec) -> ScanOptions {
    ScanOptions { enumeration_cap: job.caps.group_order, homology: HomologyOptions { cell_cap: job.caps.cell_cap, ..HomologyOptions::default() } }
}

fn cat_build(job: &JobSpec, kind: CatKind, field: Field) -> Result<Executed, CliError> {
    let cat = build_cat(kind, field, job.caps.dmax, job.caps.morphism_cap)?;
    let n = cat.num_objects();
    let objects: Vec<Value> = cat
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut v = json!({ "id": i, "size": o.size, "key": hex(&o.key()) });
            if let ObjData::Pair(w) = &o.data {
                v["subspace_dim"] = json!(w.dim());
            }
            v
        })
        .collect();
    let hom_counts: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| cat.hom(a, b).len()).collect()).collect();
    done(
        RunStatus::Ok,
        json!({
            "description": cat.description(),
            "num_objects": n,
            "num_morphisms": cat.num_morphisms(),
            "content_hash": hex(&cat.content_hash()),
            "objects": objects,
            "hom_counts": hom_counts,
        }),
    )
}

/// Validation triples checked exhaustively below this bound, sampled above it.
const VALIDATION_BOUND: usize = 20_000_000;

fn cat_check(job: &JobSpec, kind: CatKind, field: Field) -> Result<Executed, CliError> {
    let cat = build_cat(kind, field, job.caps.dmax, job.caps.morphism_cap)?;
    let v = cat.validate(VALIDATION_BOUND)?;
    done(
        RunStatus::Ok,
        json!({
            "description": cat.description(),
            "morphisms": v.morphisms,
            "triples_checked": v.triples_checked,
            "exhaustive": v.exhaustive,
            "valid": true,
        }),
    )
}

fn tor(job: &JobSpec, kind: CatKind, oracle: bool, field: Field) -> Result<Executed, CliError> {
    let (g, f) = (job.functors.contra()?, job.functors.co()?);
    let caps = job.caps.cap_list();
    let maxdeg = job.caps.max_degree;
    let cache = ResolutionCache::new();
    let mut last: Option<(LinRep, LinRep)> = None;
    // keep the original error kind across the engine callback
    let mut failure: Option<CliError> = None;
    let records = tor_across_caps(&format!("Tor[{kind}]({g}, {f})"), &caps, maxdeg, Side::Right, &ResolveOptions::default(), &cache, |cap| {
        let built = build_cat(kind, field, cap, job.caps.morphism_cap).and_then(|cat| Ok((contravariant(g, &cat, field)?, covariant(f, &cat, field)?)));
        match built {
            Ok(pair) => {
                last = Some(pair.clone());
                Ok(pair)
            }
            Err(e) => {
                let msg = e.to_string();
                failure = Some(e);
                Err(crate::homalg::HomAlgError::Invalid(msg))
            }
        }
    });
    let records = match (records, failure) {
        (_, Some(e)) => return Err(e),
        (r, None) => r?,
    };
    let top = records.last().expect("at least one cap");
    let mut status = if caps.len() > 1 && !top.stable { RunStatus::Inconclusive } else { RunStatus::Ok };
    let mut out = json!({ "records": records, "dims": top.dims });
    if oracle {
        let (gl, fl) = last.expect("the last cap was built");
        let dims = bar_tor_oracle(&gl, &fl, maxdeg, DEFAULT_BAR_MORPHISM_CAP)?;
        if dims != top.dims {
            status = RunStatus::Fail;
        }
        out["oracle_dims"] = json!(dims);
        out["oracle_agrees"] = json!(dims == top.dims);
    }
    done(status, out)
}

fn group_hom(job: &JobSpec, kind: GroupKind, n: usize, field: Field) -> Result<Executed, CliError> {
    let group = build_group(kind, n, field, job.caps.group_order)?;
    let expr = job.functors.co.as_ref().map(|e| e.0.clone()).unwrap_or(FunctorExpr::Const(1));
    let module = GModule::from_functor(&group, &expr)?;
    let dims = group_homology(&group, &module, job.caps.max_degree, &scan_options(job).homology)?;
    done(
        RunStatus::Ok,
        json!({
            "group": group.label(),
            "order": group.order().map(|o| o.to_string()),
            "module": expr.to_string(),
            "module_dim": module.dim(),
            "degrees": (0..dims.len()).collect::<Vec<_>>(),
            "dims": dims,
        }),
    )
}

fn scan(job: &JobSpec, kind: GroupKind, degree: usize, field: Field) -> Result<Executed, CliError> {
    let r = stable_scan(kind, field, job.functors.co()?, degree, job.caps.n_max, &scan_options(job))?;
    let status = if r.plateau { RunStatus::Ok } else { RunStatus::Inconclusive };
    let plateau_value = r.plateau_value();
    done(status, json!({ "scan": r, "plateau_value": plateau_value }))
}

fn verify(job: &JobSpec, target: VerifyTarget, cat: Option<CatKind>, field: Field) -> Result<Executed, CliError> {
    let (dmax, mcap) = (job.caps.dmax, job.caps.morphism_cap);
    match target {
        VerifyTarget::Psi => {
            let kinds = match cat {
                None => vec![CatKind::Quad, CatKind::Alt],
                Some(k @ (CatKind::Quad | CatKind::Alt)) => vec![k],
                Some(k) => return Err(CliError::Job(format!("verify psi runs on quad or alt, not {k}"))),
            };
            let sp = build_span_cat(&build_vect_cat(field, dmax, VectClass::Inj, mcap)?)?;
            let mut reports = Vec::new();
            for k in kinds {
                let q = build_cat(k, field, dmax, mcap)?;
                let r = verify_psi(&q, &sp, PsiChecks::ALL)?;
                reports.push(json!({ "cat": k, "passed": r.passed(), "report": r }));
            }
            let passed = reports.iter().all(|r| r["passed"] == json!(true));
            done(pass_or_fail(passed), json!({ "passed": passed, "checks": reports }))
        }
        VerifyTarget::Morita => {
            let r = match cat.unwrap_or(CatKind::Gamma) {
                CatKind::Gamma => verify_morita_gamma(dmax, field)?,
                CatKind::Inj => verify_morita_spans(&build_vect_cat(field, dmax, VectClass::Inj, mcap)?, field)?,
                CatKind::Theta => verify_morita_spans(&build_set_cat(dmax, SetKind::Injections)?, field)?,
                k => return Err(CliError::Job(format!("verify morita runs on gamma, inj or theta, not {k}"))),
            };
            done(pass_or_fail(r.passed()), json!({ "passed": r.passed(), "report": r }))
        }
        VerifyTarget::Pirashvili => {
            let gamma = build_set_cat(dmax, SetKind::Pointed)?;
            let omega = build_set_cat(dmax, SetKind::Surjections)?;
            let mut modules: Vec<LinRep> = (0..=dmax).map(|c| LinRep::projective(&omega, field, c).with_label(format!("P_{c}"))).collect();
            if dmax >= 2 {
                modules.push(modules[1].direct_sum(&modules[2])?.with_label("P_1 (+) P_2"));
            }
            let mut rows = Vec::new();
            let mut passed = true;
            for x in &modules {
                let iso = round_trip(x, &gamma).is_ok();
                passed &= iso;
                rows.push(json!({ "module": x.label(), "dims": x.dims(), "natural_iso": iso }));
            }
            done(pass_or_fail(passed), json!({ "passed": passed, "modules": rows }))
        }
        VerifyTarget::Axioms => {
            let kind = cat.unwrap_or(CatKind::Theta);
            let c = build_cat(kind, field, dmax, mcap)?;
            let s = stabilization(&c, kind, field)?;
            let reports = check_axioms(&c, &s, &Axiom::ALL);
            let status = if reports.iter().any(|r| r.outcome == AxiomOutcome::Inconclusive) { RunStatus::Inconclusive } else { RunStatus::Ok };
            done(status, json!({ "cat": c.description(), "stabilization_length": s.len(), "axioms": reports }))
        }
        VerifyTarget::Exponential => {
            let degmax = job.caps.max_degree;
            let families = [("S", ExpFamily::Sym), ("L", ExpFamily::Ext), ("G", ExpFamily::Div)];
            let exp: Vec<Value> = families
                .iter()
                .map(|&(name, fam)| {
                    let r = exponential_check(fam, field, dmax, degmax);
                    json!({ "family": name, "passed": r.passed(), "report": r })
                })
                .collect();
            let mats = all_square_matrices(field, 2);
            let conv: Vec<Value> = families
                .iter()
                .map(|&(name, fam)| {
                    let failures = mats.iter().flat_map(|f| mats.iter().map(move |g| (f, g))).filter(|(f, g)| !convolution_check(fam, f, g, degmax).passed()).count();
                    json!({ "family": name, "pairs": mats.len() * mats.len(), "failures": failures })
                })
                .collect();
            let passed = exp.iter().all(|r| r["passed"] == json!(true)) && conv.iter().all(|r| r["failures"] == json!(0));
            done(pass_or_fail(passed), json!({ "passed": passed, "exponential": exp, "convolution": conv }))
        }
    }
}

fn all_square_matrices(field: Field, n: usize) -> Vec<MatF> {
    let q = field.size();
    (0..q.pow((n * n) as u32))
        .map(|mut code| {
            let data = (0..n * n)
                .map(|_| {
                    let x = code % q;
                    code /= q;
                    x as crate::exactla::Elem
                })
                .collect();
            MatF::from_data(field, n, n, data)
        })
        .collect()
}

fn group_of(group: Option<super::GroupArg>) -> Result<GroupKind, CliError> {
    group.map(GroupKind::from).ok_or_else(|| CliError::Job("this comparison needs --group".into()))
}

fn compare(job: &JobSpec, target: CompareTarget, group: Option<super::GroupArg>, module: Option<&str>, field: Field) -> Result<Executed, CliError> {
    let opts = comparison_options(job);
    match target {
        CompareTarget::Main0 => {
            let r = cmp::main_theorem_degree0(field, group_of(group)?, job.functors.co()?, &opts)?;
            done(from_status(r.status), r)
        }
        CompareTarget::LowDeg => {
            let r = cmp::main_theorem_lowdeg(field, group_of(group)?, job.functors.co()?, job.caps.max_degree, &opts)?;
            done(from_status(r.status), r)
        }
        CompareTarget::Suslin => {
            let r = cmp::suslin_comparison(field, job.functors.contra()?, job.functors.co()?, job.caps.max_degree, &opts)?;
            done(from_status(r.status), r)
        }
        CompareTarget::Djament => {
            let r = match module.unwrap_or("nonzero") {
                "nonzero" => cmp::djament_comparison(field, |g| Ok(cmp::pairs_off_zero(g)), job.functors.co()?, job.caps.max_degree, &opts)?,
                "zero" => cmp::djament_comparison(
                    field,
                    |g| Ok(LinRep::zero(g.pairs(), field, Variance::Contravariant).with_label("0")),
                    job.functors.co()?,
                    job.caps.max_degree,
                    &opts,
                )?,
                other => return Err(CliError::Job(format!("unknown djament module {other:?} (nonzero, zero)"))),
            };
            done(from_status(r.status), r)
        }
        CompareTarget::Betley => {
            let gamma = build_set_cat(job.caps.n_max, SetKind::Pointed)?;
            let f = match module.unwrap_or("const") {
                "const" => LinRep::constant(&gamma, field, Variance::Covariant, 1),
                "reduced" => cmp::reduced_linearization(&gamma, field),
                other => return Err(CliError::Job(format!("unknown betley module {other:?} (const, reduced)"))),
            };
            let r = cmp::betley_symmetric(&f, job.caps.n_max, &opts)?;
            done(from_status(Status::all(r.status)), r)
        }
        CompareTarget::Gl => {
            let r = cmp::gl_vanishing(field, job.functors.co()?, job.caps.n_max, &opts)?;
            done(from_status(r.status), r)
        }
    }
}

fn predict(series: &str, rect: super::Rect, field: Field) -> Result<Executed, CliError> {
    let q = field.q() as u64;
    if let Ok(s) = series.parse::<SeriesId>() {
        let t = table(s, q, rect.i.0..=rect.i.1, rect.j.0..=rect.j.1)?;
        let csv = t.to_csv();
        let mut out = done(RunStatus::Ok, &t)?;
        out.csv = Some(csv);
        return Ok(out);
    }
    let target: Char2Target = series.parse()?;
    if field.p() != 2 {
        return Err(CliError::Job(format!("{target} is a characteristic-2 row; got q = {q}")));
    }
    let rows: Vec<Value> = (rect.i.0..=rect.i.1).map(|i| json!({ "i": i, "dim": char2_values(target, i) })).collect();
    let mut csv = String::from("target,i,dim\n");
    for i in rect.i.0..=rect.i.1 {
        csv.push_str(&format!("{target},{i},{}\n", char2_values(target, i)));
    }
    let mut out = done(RunStatus::Ok, json!({ "target": target.to_string(), "q": q, "entries": rows }))?;
    out.csv = Some(csv);
    Ok(out)
}

/// Runs a job without caching or output handling.
pub fn execute(job: &JobSpec) -> Result<Executed, CliError> {
    let field = job.field.field()?;
    match &job.command {
        Command::CatBuild { cat } => cat_build(job, *cat, field),
        Command::CatCheck { cat } => cat_check(job, *cat, field),
        Command::Tor { cat, oracle } => tor(job, *cat, *oracle, field),
        Command::GroupHomology { group, n } => group_hom(job, (*group).into(), *n, field),
        Command::StableScan { group, degree } => scan(job, (*group).into(), *degree, field),
        Command::Verify { target, cat } => verify(job, *target, *cat, field),
        Command::Compare { target, group, module } => compare(job, *target, *group, module.as_deref(), field),
        Command::Predict { series, rect } => predict(series, *rect, field),
    }
}
