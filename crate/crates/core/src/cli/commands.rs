use std::f64::consts::PI;
use std::fmt::Write as _;

use hyptwist::commutator::{
    allowed_commutator_region, commutator, commutator_area_identity, pentagon, trace_table_holds, PentagonReport,
};
use hyptwist::cover::{compose, polar_theta, quasimorphism_defect};
use hyptwist::doc::RepDocument;
use hyptwist::hypgeom::{axes_cross, wrap_angle, IsometryKind, I};
use hyptwist::render::Figure;
use hyptwist::surface::{c_polygon, d_polygon, euler_number, relator_product, SurfaceRep};
use hyptwist::twist::{twist, twist_at_infinity, twist_mod2pi};
use hyptwist::verify::{run_suite, VerifyOptions};
use hyptwist::{Error, LiftedIsometry, Point, Result, Tolerances};
use serde_json::{json, Value};

use super::input::{self, lift_json, point_json};
use super::{Command, Global, Outcome, PairArgs, RenderObject, Report, EXIT_FAIL};

pub fn dispatch(cmd: &Command, g: &Global, tol: Tolerances) -> Result<Outcome> {
    match cmd {
        Command::Classify { lift } => classify(input::lift_args(lift)?, tol),
        Command::Twist { lift, point } => twist_cmd(input::lift_args(lift)?, input::point(point)?, tol),
        Command::Compose { pair } => compose_cmd(pair, tol),
        Command::Commutator { pair, point } => commutator_cmd(pair, point.as_deref(), tol),
        Command::Pentagon { pair, point } => pentagon_cmd(pair, point.as_deref(), tol),
        Command::Relator { file } => relator(&input::document(file)?, tol),
        Command::Verify { suite, trials, g: genus, n } => {
            let opts = VerifyOptions { trials: *trials, seed: g.seed, tol, genus: *genus, boundary: *n };
            verify(suite, &opts, g.verbose)
        }
        Command::Render { object, pair, point, file } => render(*object, pair, point.as_deref(), file.as_deref(), tol),
    }
}

fn report(command: &'static str, inputs: Value, outputs: Value, residuals: Value, tol: Tolerances) -> Report {
    Report { command, inputs, outputs, residuals, seed: None, tolerances: tol }
}

fn ok(report: Report, text: String) -> Outcome {
    Outcome { report, text, svg: None, exit: 0 }
}

fn range_text((lo, hi): (f64, f64)) -> String {
    if lo == hi {
        format!("{{{lo}}}")
    } else {
        format!("({lo}, {hi})")
    }
}

fn classify(a: LiftedIsometry, tol: Tolerances) -> Result<Outcome> {
    let region = a.classify(tol.parabolic)?;
    let outputs = json!({
        "region": region.to_string(),
        "trace": a.trace(),
        "theta": a.theta,
        "theta_range": region.theta_range(),
        "twist_range": region.twist_range(),
    });
    let text = format!(
        "region: {region}\ntrace: {}\ntheta: {}\ntheta range: {}\ntwist range: {}\n",
        a.trace(),
        a.theta,
        range_text(region.theta_range()),
        range_text(region.twist_range()),
    );
    Ok(ok(report("classify", json!({ "lift": lift_json(&a) }), outputs, json!({}), tol), text))
}

fn twist_cmd(a: LiftedIsometry, p: Point, tol: Tolerances) -> Result<Outcome> {
    let inputs = json!({ "lift": lift_json(&a), "point": point_json(p) });
    let (value, residuals) = match p {
        Point::Ideal(_) => (twist_at_infinity(&a, p, tol.parabolic)?, json!({})),
        Point::Finite(_) => {
            let v = twist(&a, p)?;
            let m = twist_mod2pi(&a.mat, p)?;
            (v, json!({ "mod2pi_oracle": wrap_angle(v - m) }))
        }
    };
    let outputs = json!({ "twist": value, "twist_over_pi": value / PI });
    let text = format!("twist: {value}\ntwist / pi: {}\n", value / PI);
    Ok(ok(report("twist", inputs, outputs, residuals, tol), text))
}

fn region_or_ambiguous(x: &LiftedIsometry, tol: Tolerances) -> String {
    match x.classify(tol.parabolic) {
        Ok(r) => r.to_string(),
        Err(_) => "ambiguous".to_string(),
    }
}

fn compose_cmd(pair: &PairArgs, tol: Tolerances) -> Result<Outcome> {
    let (a, b, inputs) = input::pair(pair)?;
    let ba = compose(&b, &a);
    let law = wrap_angle(ba.theta - polar_theta(&ba.mat));
    let defect = quasimorphism_defect(&b, &a);
    let region = region_or_ambiguous(&ba, tol);
    let outputs = json!({ "product": lift_json(&ba), "region": region, "defect": defect });
    let text = format!("product (b a): {}\ntheta: {}\nregion: {region}\ndefect: {defect}\n", ba.mat, ba.theta);
    Ok(ok(report("compose", inputs, outputs, json!({ "group_law": law }), tol), text))
}

fn commutator_cmd(pair: &PairArgs, point: Option<&str>, tol: Tolerances) -> Result<Outcome> {
    let (a, b, mut inputs) = input::pair(pair)?;
    let c = commutator(&a, &b);
    let region = c.classify(tol.parabolic)?;
    let trace = c.trace();
    let crossing = axes_cross(&a.mat, &b.mat, tol.parabolic);
    let allowed = allowed_commutator_region(region);
    let table = trace_table_holds(trace, region, tol.parabolic);
    let mut outputs = json!({
        "commutator": lift_json(&c),
        "region": region.to_string(),
        "trace": trace,
        "allowed_region": allowed,
        "trace_table_holds": table,
        "axes_cross": crossing,
    });
    let mut residuals = json!({});
    let mut text = format!(
        "commutator: {}\ntheta: {}\ntrace: {trace}\nregion: {region}\nallowed region: {allowed}\n\
         trace table holds: {table}\naxes cross: {crossing}\n",
        c.mat, c.theta
    );
    if let Some(s) = point {
        let p = input::point(s)?;
        inputs["point"] = point_json(p);
        let tw = twist(&c, p)?;
        let r = commutator_area_identity(&a, &b, p, tol.parabolic)?;
        outputs["twist"] = json!(tw);
        residuals["area_identity"] = json!(r);
        let _ = write!(text, "twist at point: {tw}\narea identity residual: {r:e}\n");
    }
    let exit = if allowed && table { 0 } else { EXIT_FAIL };
    Ok(Outcome { report: report("commutator", inputs, outputs, residuals, tol), text, svg: None, exit })
}

/// The point used when none is given: on the axis of `[a⁻¹, b⁻¹]` when it
/// is hyperbolic, its fixed point when elliptic, otherwise `i`.
fn natural_point(a: &LiftedIsometry, b: &LiftedIsometry, tol: Tolerances) -> Point {
    let c = commutator(&a.inverse(), &b.inverse()).mat;
    match c.kind(tol.parabolic) {
        IsometryKind::Hyperbolic => c.axis(tol.parabolic).map(|g| g.apex()).unwrap_or(I),
        IsometryKind::Elliptic => c.fixed_points(tol.parabolic).first().copied().unwrap_or(I),
        _ => I,
    }
}

fn pentagon_report(pair: &PairArgs, point: Option<&str>, tol: Tolerances) -> Result<(PentagonReport, Value, Point)> {
    let (a, b, mut inputs) = input::pair(pair)?;
    let p = match point {
        Some(s) => input::point(s)?,
        None => natural_point(&a, &b, tol),
    };
    inputs["point"] = point_json(p);
    Ok((pentagon(&a, &b, p)?, inputs, p))
}

fn pentagon_figure(r: &PentagonReport) -> Figure {
    let mut f = Figure::polygon("commutator pentagon", &r.polygon.vertices);
    f.annotate(format!("area = {:.6}", r.area));
    f.annotate(format!("twist = {:.6}", r.twist_of_commutator));
    if r.degenerate {
        f.warn("degenerate pentagon");
    } else if !r.simple {
        f.warn("pentagon is not simple: area identity holds mod 2pi only");
    }
    f
}

fn pentagon_cmd(pair: &PairArgs, point: Option<&str>, tol: Tolerances) -> Result<Outcome> {
    let (r, inputs, _) = pentagon_report(pair, point, tol)?;
    let outputs = json!({
        "vertices": r.polygon.vertices.iter().map(|p| point_json(*p)).collect::<Vec<_>>(),
        "degenerate": r.degenerate,
        "simple": r.simple,
        "area": r.area,
        "twist_of_commutator": r.twist_of_commutator,
    });
    let residuals = json!({ "area_identity": r.residual, "congruence": r.congruence_residual });
    let mut text = String::new();
    for (k, v) in r.polygon.vertices.iter().enumerate() {
        let _ = writeln!(text, "p{k}: {v}");
    }
    let _ = write!(
        text,
        "degenerate: {}\nsimple: {}\narea: {}\ntwist of commutator: {}\nresidual: {:e}\ncongruence residual: {:e}\n",
        r.degenerate, r.simple, r.area, r.twist_of_commutator, r.residual, r.congruence_residual
    );
    let svg = Some(pentagon_figure(&r).to_svg());
    Ok(Outcome { report: report("pentagon", inputs, outputs, residuals, tol), text, svg, exit: 0 })
}

fn relator(doc: &RepDocument, tol: Tolerances) -> Result<Outcome> {
    let rep = doc.load()?;
    let r = relator_product(&rep);
    let closes = rep.closes_up();
    let mut outputs = json!({ "relator": lift_json(&r), "closes_up": closes, "chi": rep.euler_characteristic() });
    let mut residuals = json!({});
    let mut text =
        format!("relator: {}\ntheta: {}\ncloses up: {closes}\nchi: {}\n", r.mat, r.theta, rep.euler_characteristic());
    let mut exit = 0;
    if closes {
        let e = euler_number(&rep)?;
        outputs["euler"] = json!(e);
        residuals["theta"] = json!(e.theta_residual);
        let _ = writeln!(text, "euler number: {}\nbound satisfied: {}", e.m, e.bound_satisfied);
        if !e.bound_satisfied {
            exit = EXIT_FAIL;
        }
    }
    let mut svg = None;
    if rep.genus >= 1 || rep.boundary_count >= 3 {
        let d = d_polygon(&rep)?;
        let id = &d.identity;
        outputs["d_polygon"] = json!({
            "vertices": id.vertices.iter().map(|p| point_json(*p)).collect::<Vec<_>>(),
            "degenerate": id.degenerate,
            "simple": id.simple,
            "convex": id.convex,
            "area": id.area,
            "pentagon_areas": d.pentagon_areas,
        });
        residuals["d_identity"] = json!(id.residual);
        residuals["decomposition"] = json!(d.decomposition_residual);
        let _ = write!(
            text,
            "D polygon: {} vertices, convex: {}, area: {}\nD identity residual: {:e}\ndecomposition residual: {:e}\n",
            id.vertices.len(),
            id.convex,
            id.area,
            id.residual,
            d.decomposition_residual
        );
        svg = Some(d_figure(&rep)?.to_svg());
    }
    let inputs = json!({ "document": doc });
    Ok(Outcome { report: report("relator", inputs, outputs, residuals, tol), text, svg, exit })
}

fn verify(suite: &str, opts: &VerifyOptions, verbose: bool) -> Result<Outcome> {
    if verbose {
        eprintln!("running {suite}: {} trials, seed {}", opts.trials, opts.seed);
    }
    let r = run_suite(suite, opts)?;
    let inputs = json!({ "suite": suite, "trials": opts.trials, "g": opts.genus, "n": opts.boundary });
    let mut text = format!(
        "{} {suite}: {} checked, {} skipped, {} violations\n",
        if r.passed { "PASS" } else { "FAIL" },
        r.checked,
        r.skipped,
        r.violations
    );
    for (k, v) in &r.max_residuals {
        let _ = writeln!(text, "  max {k}: {v:e}");
    }
    for (k, v) in &r.counts {
        let _ = writeln!(text, "  {k}: {v}");
    }
    if let Some(d) = &r.details {
        let _ = writeln!(text, "  details: {d}");
    }
    if let Some(c) = &r.counterexample {
        let _ = writeln!(text, "counterexample: {c}");
    }
    let exit = if r.passed { 0 } else { EXIT_FAIL };
    let residuals = json!(r.max_residuals);
    let mut rep = report("verify", inputs, json!(r), residuals, opts.tol);
    rep.seed = Some(opts.seed);
    Ok(Outcome { report: rep, text, svg: None, exit })
}

fn d_figure(rep: &SurfaceRep) -> Result<Figure> {
    let d = d_polygon(rep)?;
    let mut f = Figure::polygon("fundamental polygon", &d.identity.vertices);
    f.annotate(format!("area = {:.6}", d.identity.area));
    f.annotate(format!("twist of relator = {:.6}", d.identity.lhs));
    if !d.identity.convex {
        f.warn("polygon is not convex");
    }
    Ok(f)
}

fn render(
    object: RenderObject,
    pair: &PairArgs,
    point: Option<&str>,
    file: Option<&std::path::Path>,
    tol: Tolerances,
) -> Result<Outcome> {
    let need_file = || file.ok_or_else(|| Error::InvalidArgument(format!("render {object:?} needs --file")));
    let (figure, inputs) = match object {
        RenderObject::Pentagon => {
            let (r, inputs, _) = pentagon_report(pair, point, tol)?;
            (pentagon_figure(&r), inputs)
        }
        RenderObject::Axes => {
            let (a, b, inputs) = input::pair(pair)?;
            let mut f = Figure::new("axes");
            for (name, m) in [("a", a.mat), ("b", b.mat)] {
                match m.axis(tol.parabolic) {
                    Ok(g) => f.geodesic(&g),
                    Err(_) => f.warn(format!("{name} is not hyperbolic")),
                }
            }
            f.annotate(format!("axes cross: {}", axes_cross(&a.mat, &b.mat, tol.parabolic)));
            (f, inputs)
        }
        RenderObject::Cpoly => {
            let doc = input::document(need_file()?)?;
            let rep = doc.load()?;
            let c = c_polygon(&rep.gammas, rep.basepoint)?;
            let mut f = Figure::polygon("composition polygon", &c.vertices);
            f.annotate(format!("area = {:.6}", c.area));
            f.annotate(format!("twist of product = {:.6}", c.lhs));
            if !c.simple {
                f.warn("polygon is not simple");
            }
            (f, json!({ "document": doc }))
        }
        RenderObject::Dpoly => {
            let doc = input::document(need_file()?)?;
            (d_figure(&doc.load()?)?, json!({ "document": doc }))
        }
    };
    let svg = figure.to_svg();
    let mut inputs = inputs;
    inputs["object"] = json!(object);
    let outputs = json!({ "svg": svg, "warnings": figure.warnings() });
    Ok(Outcome {
        report: report("render", inputs, outputs, json!({}), tol),
        text: svg.clone(),
        svg: Some(svg),
        exit: 0,
    })
}
