use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{load_cochain, load_diagram, load_quandle, read_json, statesum_report};
use crate::{CmdResult, Failure};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Job {
    pd: PathBuf,
    quandle: PathBuf,
    cocycle: PathBuf,
    #[serde(default)]
    x0: usize,
    #[serde(default, rename = "mod")]
    modulus: Option<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Manifest {
    Wrapped { jobs: Vec<Value> },
    Bare(Vec<Value>),
}

fn run_job(base: &Path, raw: &Value) -> Result<Value, Failure> {
    let job: Job = serde_json::from_value(raw.clone()).map_err(|e| Failure::Input(format!("job: {e}")))?;
    let d = load_diagram(base.join(&job.pd))?;
    let x = load_quandle(base.join(&job.quandle))?;
    let phi = load_cochain(base.join(&job.cocycle), 3, &x)?;
    let report = statesum_report(&d, &x, &phi, job.modulus, job.x0)?;
    Ok(serde_json::to_value(report).expect("serializable"))
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

pub fn run(manifest: &str, out: Option<&str>) -> CmdResult {
    let raw = read_json(manifest)?;
    let jobs = match serde_json::from_value::<Manifest>(raw) {
        Ok(Manifest::Wrapped { jobs } | Manifest::Bare(jobs)) => jobs,
        Err(_) => return Err(Failure::Input("manifest error: expected {\"jobs\": [...]} or a list of jobs".into())),
    };
    let base = Path::new(manifest).parent().unwrap_or(Path::new(".")).to_path_buf();
    let results: Vec<Value> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, job)| match run_job(&base, job) {
            Ok(result) => json!({ "index": index, "job": job, "status": "ok", "result": result }),
            Err(Failure::Input(e)) => json!({ "index": index, "job": job, "status": "error", "error": e }),
            Err(Failure::Budget(e)) => json!({ "index": index, "job": job, "status": "budget", "error": e }),
        })
        .collect();
    let ok = results.iter().filter(|r| r["status"] == "ok").count();
    let report = json!({ "jobs": results, "ok": ok, "failed": jobs.len() - ok });
    match out {
        None => Ok(report),
        Some(path) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            write_atomic(Path::new(path), &text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
            Ok(json!({ "out": path, "jobs": jobs.len(), "ok": ok, "failed": jobs.len() - ok }))
        }
    }
}
