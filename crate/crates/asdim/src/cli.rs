//! Command-line interface.
//!
//! Every command loads its input files into a [`Workspace`], runs one
//! operation and writes canonical documents either to `--out DIR` (one
//! `<id>.json` per document) or to standard output. Progress and errors go to
//! standard error as JSON lines. Exit codes: 0 success, 1 validation,
//! 2 resolution, 3 infeasible, 4 internal assertion.

use std::io::Write;
use std::path::PathBuf;

use asdim_core::estimate::{
    asdim_profile, compare_with_quotient, equivariant_cover_pipeline, estimate_cover, family_profile,
    EstimateOptions, MeshBound, Mode, SearchLimits, Verdict,
};
use asdim_core::lift::{lift_equivariant, pushforward_cover};
use asdim_core::sspace::{restrict_decomposition, sspace_componentwise_action, sspace_quotient_commute};
use asdim_core::cover::CoverCertificate;
use asdim_core::{quotient, Scalar};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::convert;
use crate::error::{CliError, ErrorClass};
use crate::format::{profile_csv, to_canonical_string, Document};
use crate::generate::{self, CycleSymmetry};
use crate::workspace::Workspace;

#[derive(Debug, Parser)]
#[command(name = "asdim", version, about = "Exact covers, quotients and dimension profiles of finite metric spaces")]
pub struct Cli {
    /// Directory for output documents (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exact,
    Greedy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Exact => Mode::Exact,
            ModeArg::Greedy => Mode::Greedy,
        }
    }
}

#[derive(Clone, Debug, clap::Args)]
pub struct SearchArgs {
    /// Mesh bound B (default 4R).
    #[arg(long = "B")]
    pub mesh_bound: Option<Scalar>,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    /// Largest space searched exactly.
    #[arg(long, default_value_t = SearchLimits::default().exact_cap)]
    pub cap: usize,
}

impl SearchArgs {
    fn options(&self) -> EstimateOptions {
        EstimateOptions {
            mesh_bound: self.mesh_bound.map_or(MeshBound::default(), MeshBound::Fixed),
            mode: self.mode.into(),
            limits: SearchLimits::with_cap(self.cap),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Grid,
    Cycle,
    Path,
    CayleyBall,
    Random,
    RandomAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Symmetry {
    None,
    Rotation,
    Reflection,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate files; exit 0 iff everything is valid.
    Validate { files: Vec<PathBuf> },
    /// Quotient space F\X of an action.
    Quotient {
        #[arg(long)]
        action: String,
        files: Vec<PathBuf>,
    },
    /// Push a cover of X down to F\X.
    Pushforward {
        #[arg(long)]
        action: String,
        #[arg(long)]
        cover: String,
        files: Vec<PathBuf>,
    },
    /// Lift a cover of F\X to an F-equivariant cover of X.
    Lift {
        #[arg(long)]
        action: String,
        /// Cover of the quotient space.
        #[arg(long)]
        cover: String,
        #[arg(long = "R")]
        radius: Scalar,
        files: Vec<PathBuf>,
    },
    /// Estimate a cover of F\X at scale R and lift it.
    EquivariantCover {
        #[arg(long)]
        action: String,
        #[arg(long = "R")]
        radius: Scalar,
        #[command(flatten)]
        search: SearchArgs,
        files: Vec<PathBuf>,
    },
    /// Assemble an S-space; optionally act componentwise or restrict a
    /// decomposition to the components.
    Sspace {
        #[arg(long)]
        sspace: String,
        /// One action per component, comma separated.
        #[arg(long, value_delimiter = ',')]
        actions: Vec<String>,
        /// Decomposition of the assembled space to restrict.
        #[arg(long)]
        restrict: Option<String>,
        files: Vec<PathBuf>,
    },
    /// Minimal-dimension cover at scale R with mesh at most B.
    Estimate {
        #[arg(long)]
        space: String,
        #[arg(long = "R")]
        radius: Scalar,
        #[command(flatten)]
        search: SearchArgs,
        files: Vec<PathBuf>,
    },
    /// Dimension profile over several scales, for one space or a family.
    Profile {
        /// Space id; repeat for a family.
        #[arg(long, required = true)]
        space: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<Scalar>,
        /// Also profile the quotient of this action and compare.
        #[arg(long)]
        action: Option<String>,
        /// Also write a CSV table next to each profile.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        search: SearchArgs,
        files: Vec<PathBuf>,
    },
    /// Write a generated instance (space, and group and action if any).
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Points for path/cycle/random, width for grid, radius for cayley-ball.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Grid height (default: square).
        #[arg(long)]
        height: Option<usize>,
        #[arg(long, value_enum, default_value = "none")]
        symmetry: Symmetry,
        /// Rotation step for cycles.
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Id of the generated space (default derived from the kind).
        #[arg(long)]
        id: Option<String>,
    },
}

/// Where output documents and report lines go.
pub struct Output<'a> {
    pub dir: Option<PathBuf>,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

impl Output<'_> {
    pub fn report(&mut self, line: Value) {
        let _ = writeln!(self.stderr, "{line}");
    }

    fn text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(dir.join(name), text))
                    .map_err(|e| CliError::resolution(format!("cannot write {}: {e}", dir.join(name).display())))?;
                let path = dir.join(name).display().to_string();
                self.report(json!({"level": "info", "event": "wrote", "path": path}));
            }
            None => {
                let _ = self.stdout.write_all(text.as_bytes());
            }
        }
        Ok(())
    }

    pub fn document(&mut self, doc: Document) -> Result<(), CliError> {
        let name = format!("{}.json", doc.id());
        self.text(&name, &to_canonical_string(&doc))
    }
}

fn certificate_line(id: &str, cert: &CoverCertificate) -> Value {
    json!({
        "level": "info",
        "event": "certificate",
        "cover": id,
        "certificate": serde_json::to_value(convert::certificate_doc(cert)).expect("serializes"),
    })
}

/// Parses arguments and runs; returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut Output) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out.stdout, "{e}");
                    return 0;
                }
                _ => ErrorClass::Validation.exit_code(),
            };
            out.report(json!({"level": "error", "class": "usage", "exit_code": code, "message": e.to_string()}));
            return code;
        }
    };
    if cli.out.is_some() {
        out.dir = cli.out.clone();
    }
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli.command, out)))
        .unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(CliError::internal(message))
        });
    finish(result, out)
}

/// Reports an error, if any, and maps it to the exit code.
pub fn finish(result: Result<(), CliError>, out: &mut Output) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) => {
            out.report(e.to_json());
            e.exit_code()
        }
    }
}

pub fn run(command: Command, out: &mut Output) -> Result<(), CliError> {
    match command {
        Command::Validate { files } => validate(&files, out),
        Command::Quotient { action, files } => {
            let ws = Workspace::open(&files)?;
            let a = &ws.action(&action)?.action;
            let q = quotient(a)?;
            let id = format!("{action}.quotient");
            out.report(json!({"level": "info", "event": "quotient", "action": action, "points": q.space().len(),
                "orbits": q.orbits().iter().map(|o| o.as_slice().to_vec()).collect::<Vec<_>>()}));
            out.document(Document::Space(convert::space_doc(&id, q.space())))
        }
        Command::Pushforward { action, cover, files } => {
            let ws = Workspace::open(&files)?;
            let entry = ws.action(&action)?;
            let c = ws.cover(&cover)?;
            if !ws.space(&c.space)?.same_metric(entry.action.space()) {
                return Err(CliError::validation(format!("cover {cover:?} does not live on the action's space")));
            }
            let q = quotient(&entry.action)?;
            let (image, cert) = pushforward_cover(&entry.action, &q, &c.cover)?;
            let qid = format!("{action}.quotient");
            let cid = format!("{cover}.pushforward");
            out.report(certificate_line(&cid, &cert));
            out.document(Document::Space(convert::space_doc(&qid, q.space())))?;
            out.document(Document::Cover(convert::cover_doc(&cid, &qid, &image, Some(&cert), None, None)))
        }
        Command::Lift { action, cover, radius, files } => {
            let ws = Workspace::open(&files)?;
            let entry = ws.action(&action)?;
            let c = ws.cover(&cover)?;
            let q = quotient(&entry.action)?;
            if !ws.space(&c.space)?.same_metric(q.space()) {
                return Err(CliError::validation(format!(
                    "cover {cover:?} does not live on the quotient of {action:?}"
                )));
            }
            let lift = lift_equivariant(&entry.action, &q, &c.cover, radius)?;
            let lid = format!("{cover}.lift");
            out.report(certificate_line(&lid, &lift.certificate));
            out.document(Document::Cover(convert::cover_doc(
                &lid,
                &entry.space,
                &lift.cover,
                Some(&lift.certificate),
                Some(&action),
                Some("lift"),
            )))?;
            let g = entry.action.group();
            out.document(Document::LiftTrace(convert::trace_doc(&format!("{lid}.trace"), &action, &cover, &lid, g, &lift.trace)))
        }
        Command::EquivariantCover { action, radius, search, files } => {
            let ws = Workspace::open(&files)?;
            let entry = ws.action(&action)?;
            let result = equivariant_cover_pipeline(&entry.action, radius, &search.options())?;
            let qid = format!("{action}.quotient");
            let qcid = format!("{qid}.cover");
            let cid = format!("{action}.cover");
            let qc = &result.quotient_cover;
            out.report(certificate_line(&qcid, &qc.certificate));
            out.report(certificate_line(&cid, &result.lift.certificate));
            out.document(Document::Space(convert::space_doc(&qid, result.quotient.space())))?;
            out.document(Document::Cover(convert::cover_doc(&qcid, &qid, &qc.cover, Some(&qc.certificate), None, Some(qc.method.tag()))))?;
            out.document(Document::Cover(convert::cover_doc(
                &cid,
                &entry.space,
                &result.lift.cover,
                Some(&result.lift.certificate),
                Some(&action),
                Some("lift"),
            )))?;
            let g = entry.action.group();
            out.document(Document::LiftTrace(convert::trace_doc(&format!("{cid}.trace"), &action, &qcid, &cid, g, &result.lift.trace)))
        }
        Command::Sspace { sspace, actions, restrict, files } => {
            let ws = Workspace::open(&files)?;
            let entry = ws.sspace(&sspace)?;
            let s = &entry.sspace;
            out.report(json!({"level": "info", "event": "sspace", "id": sspace, "components": s.component_count(),
                "points": s.assembled().len()}));
            out.document(Document::Space(convert::space_doc(&format!("{sspace}.assembled"), s.assembled())))?;
            if !actions.is_empty() {
                let acts = actions.iter().map(|a| ws.action(a).map(|e| e.action.clone())).collect::<Result<Vec<_>, _>>()?;
                let combined = sspace_componentwise_action(s, &acts)?;
                let comm = sspace_quotient_commute(s, &acts)?;
                out.report(json!({"level": "info", "event": "quotient-commutes", "id": sspace,
                    "points": comm.lhs.space().len(), "map": comm.map}));
                let first = ws.action(&actions[0])?;
                let gid = first.group.clone();
                let aid = format!("{sspace}.action");
                out.document(Document::Action(convert::action_doc(&aid, &gid, &sspace, &combined)))?;
                let comp_ids: Vec<String> = entry.components.iter().map(|c| format!("{sspace}.{c}.quotient")).collect();
                for (cid, q) in comp_ids.iter().zip(&comm.component_quotients) {
                    out.document(Document::Space(convert::space_doc(cid, q.space())))?;
                }
                out.document(Document::Sspace(convert::sspace_doc(&format!("{sspace}.quotient"), &comp_ids, &comm.rhs)))?;
            }
            if let Some(did) = restrict {
                let d = ws.decomposition(&did)?;
                if !ws.space(&d.space)?.same_metric(s.assembled()) {
                    return Err(CliError::validation(format!("decomposition {did:?} is not on {sspace:?}")));
                }
                for (n, part) in restrict_decomposition(s, &d.decomposition)?.iter().enumerate() {
                    let id = format!("{did}.{n}");
                    out.document(Document::Decomposition(convert::decomposition_doc(&id, &entry.components[n], part)))?;
                }
            }
            Ok(())
        }
        Command::Estimate { space, radius, search, files } => {
            let ws = Workspace::open(&files)?;
            let m = ws.space(&space)?;
            let options = search.options();
            let bound = options.mesh_bound.at(radius);
            let found = estimate_cover(m, radius, &options)?
                .ok_or(asdim_core::estimate::EstimateError::Infeasible { radius, mesh_bound: bound })?;
            let id = format!("{space}.cover");
            out.report(certificate_line(&id, &found.certificate));
            out.document(Document::Cover(convert::cover_doc(&id, &space, &found.cover, Some(&found.certificate), None, Some(found.method.tag()))))
        }
        Command::Profile { space, scales, action, csv, search, files } => {
            let ws = Workspace::open(&files)?;
            let options = search.options();
            let spaces = space.iter().map(|s| ws.space(s).cloned()).collect::<Result<Vec<_>, _>>()?;
            let family = family_profile(&spaces, None, &scales, &options)?;
            for (sid, p) in space.iter().zip(&family.spaces) {
                write_profile(out, sid, &format!("{sid}.profile"), p, csv)?;
            }
            if space.len() > 1 {
                out.report(json!({"level": "info", "event": "family", "spaces": space,
                    "uniform": family.uniform.iter().map(|u| json!({"R": u.radius.to_string(),
                        "dimension": u.dimension, "mesh": u.mesh.map(|m| m.to_string())})).collect::<Vec<_>>()}));
            }
            if let Some(aid) = action {
                let entry = ws.action(&aid)?;
                let q = quotient(&entry.action)?;
                let qid = format!("{aid}.quotient");
                out.document(Document::Space(convert::space_doc(&qid, q.space())))?;
                let qp = asdim_profile(q.space(), &scales, &options)?;
                write_profile(out, &qid, &format!("{qid}.profile"), &qp, csv)?;
                let pairs: Vec<(Scalar, Scalar)> = scales.iter().map(|&r| (r, options.mesh_bound.at(r))).collect();
                for c in compare_with_quotient(&entry.action, &pairs, &options.limits)? {
                    let dim = |f: &Option<asdim_core::estimate::FoundCover>| f.as_ref().map(|f| f.certificate.dimension);
                    let event = match c.verdict {
                        Verdict::Equal => "equal",
                        Verdict::QuotientLower => "finite-scale-gap",
                        Verdict::QuotientHigher => "quotient-higher",
                        Verdict::Undetermined => "undetermined",
                    };
                    out.report(json!({"level": "info", "event": "compare", "verdict": event,
                        "R": c.radius.to_string(), "B": c.mesh_bound.to_string(),
                        "space": dim(&c.space), "quotient": dim(&c.quotient)}));
                }
            }
            Ok(())
        }
        Command::Generate { kind, n, height, symmetry, step, seed, id } => generate_cmd(kind, n, height, symmetry, step, seed, id, out),
    }
}

fn write_profile(
    out: &mut Output,
    space: &str,
    id: &str,
    p: &asdim_core::estimate::DimensionProfile,
    csv: bool,
) -> Result<(), CliError> {
    let mut cover_ids = Vec::new();
    for (i, e) in p.entries.iter().enumerate() {
        match &e.found {
            Some(f) => {
                let cid = format!("{id}.{i}.cover");
                out.document(Document::Cover(convert::cover_doc(&cid, space, &f.cover, Some(&f.certificate), None, Some(f.method.tag()))))?;
                cover_ids.push(Some(cid));
            }
            None => cover_ids.push(None),
        }
    }
    let doc = convert::profile_doc(id, space, p, &cover_ids);
    if csv {
        out.text(&format!("{id}.csv"), &profile_csv(&doc))?;
    }
    out.document(Document::Profile(doc))
}

fn validate(files: &[PathBuf], out: &mut Output) -> Result<(), CliError> {
    if files.is_empty() {
        return Err(CliError::validation("no input files"));
    }
    let (ws, errors) = Workspace::load_all(files);
    for (kind, id) in &ws.registered {
        out.report(json!({"level": "info", "event": "valid", "kind": kind, "id": id}));
    }
    let worst = errors.iter().max_by_key(|e| e.exit_code()).cloned();
    for e in &errors {
        out.report(e.to_json());
    }
    match worst {
        // Already reported; surface only the exit code.
        Some(e) => Err(CliError { details: vec![], message: format!("{} invalid object(s)", errors.len()), ..e }),
        None => Ok(()),
    }
}

#[allow(clippy::too_many_arguments)]
fn generate_cmd(
    kind: Kind,
    n: usize,
    height: Option<usize>,
    symmetry: Symmetry,
    step: usize,
    seed: u64,
    id: Option<String>,
    out: &mut Output,
) -> Result<(), CliError> {
    let on = symmetry != Symmetry::None;
    let inst = match kind {
        Kind::Path => generate::path(n, on)?,
        Kind::Cycle => generate::cycle(
            n,
            match symmetry {
                Symmetry::None => CycleSymmetry::None,
                Symmetry::Rotation => CycleSymmetry::Rotation(step),
                Symmetry::Reflection => CycleSymmetry::Reflection,
            },
        )?,
        Kind::Grid => generate::grid(n, height.unwrap_or(n), on)?,
        Kind::CayleyBall => generate::cayley_ball(n, on)?,
        Kind::Random => generate::random_space(n, seed)?,
        Kind::RandomAction => {
            let (name, a) = generate::random_action(n, seed)?;
            generate::Instance { name: format!("random-action-{name}-s{seed}"), space: a.space().clone(), action: Some(a) }
        }
    };
    let sid = id.unwrap_or(inst.name);
    out.document(Document::Space(convert::space_doc(&sid, &inst.space)))?;
    if let Some(a) = &inst.action {
        let gid = format!("{sid}.group");
        out.document(Document::Group(convert::group_doc(&gid, a.group())))?;
        out.document(Document::Action(convert::action_doc(&format!("{sid}.action"), &gid, &sid, a)))?;
    }
    Ok(())
}
