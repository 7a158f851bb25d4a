//! Category sources and the verified-category cache.

use std::fs;
use std::path::{Path, PathBuf};

use mtcdef::category::{gen_sl2k, verify_all, CategoryJson, MtcData, PentagonMode, Report};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CliError, CliResult};

#[derive(clap::Args, Clone, Debug)]
pub struct CategoryArgs {
    /// Category family; only sl2 is built in.
    #[arg(long, default_value = "sl2")]
    pub category: String,
    /// Level k of sl(2)_k.
    #[arg(long)]
    pub level: Option<usize>,
    /// Load the category from a JSON file instead of generating it.
    #[arg(long)]
    pub category_file: Option<PathBuf>,
    /// Skip verification of a loaded category file.
    #[arg(long)]
    pub trust: bool,
    #[command(flatten)]
    pub verify: VerifyArgs,
}

#[derive(clap::Args, Clone, Debug)]
pub struct VerifyArgs {
    /// Check every pentagon instance instead of sampling.
    #[arg(long)]
    pub full: bool,
    /// Number of sampled pentagon instances.
    #[arg(long, default_value_t = 100_000)]
    pub sample: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl VerifyArgs {
    pub fn mode(&self) -> PentagonMode {
        if self.full {
            PentagonMode::Full
        } else {
            PentagonMode::Sampled { count: self.sample, seed: self.seed }
        }
    }
}

pub fn generate(family: &str, level: Option<usize>) -> CliResult<MtcData> {
    if family != "sl2" {
        return Err(CliError::Usage(format!("unknown category family {family:?}; only sl2 is built in")));
    }
    match level {
        None => Err(CliError::Usage("--level is required for generated categories".into())),
        Some(0) => Err(CliError::Usage("the level must be at least 1".into())),
        Some(k) => Ok(gen_sl2k(k)),
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("MTCDEF_CACHE").map(PathBuf::from)
}

fn content_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn cached(text: &str) -> bool {
    cache_dir().map(|d| d.join(format!("{}.json", content_hash(text))).exists()).unwrap_or(false)
}

fn store(text: &str) {
    if let Some(d) = cache_dir() {
        // the cache is an optimization; failures to write it are ignored
        let _ = fs::create_dir_all(&d);
        let _ = fs::write(d.join(format!("{}.json", content_hash(text))), text);
    }
}

pub fn category_text(c: &MtcData) -> String {
    serde_json::to_string(&c.to_json()).expect("category json")
}

/// Run the verifiers unless the same content is already in the cache.
pub fn verify_cached(c: &MtcData, text: &str, mode: PentagonMode) -> CliResult<Option<Vec<Report>>> {
    if cached(text) {
        return Ok(None);
    }
    let reports = verify_all(c, mode);
    if let Some(r) = reports.iter().find(|r| !r.passed) {
        return Err(CliError::Failure(format!("{} check failed: {}", r.check, describe(r))));
    }
    store(text);
    Ok(Some(reports))
}

pub fn describe(r: &Report) -> String {
    match &r.failure {
        Some(f) => format!("{} at labels {:?}: {} != {}", f.message, f.labels, f.lhs, f.rhs),
        None => "passed".into(),
    }
}

pub fn read_category(path: &Path) -> CliResult<(MtcData, String)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let j: CategoryJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Failure(format!("{} is not a category file: {e}", path.display())))?;
    let c = MtcData::from_json(&j).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    Ok((c, text))
}

pub fn mode_json(mode: PentagonMode) -> Value {
    match mode {
        PentagonMode::Full => json!({"mode": "full"}),
        PentagonMode::Sampled { count, seed } => json!({"mode": "sampled", "count": count, "seed": seed}),
    }
}

/// The category named by the arguments, verified unless trusted or cached,
/// with a summary of how it was verified.
pub fn load(args: &CategoryArgs) -> CliResult<(MtcData, Value)> {
    let mode = args.verify.mode();
    let (c, text) = match &args.category_file {
        Some(p) => {
            if args.level.is_some() {
                return Err(CliError::Usage("give either --level or --category-file, not both".into()));
            }
            let (c, text) = read_category(p)?;
            if args.trust {
                return Ok((c, json!({"mode": "trust"})));
            }
            (c, text)
        }
        None => {
            if args.trust {
                return Err(CliError::Usage("--trust only applies to loaded category files".into()));
            }
            let c = generate(&args.category, args.level)?;
            let text = category_text(&c);
            (c, text)
        }
    };
    let ran = verify_cached(&c, &text, mode)?;
    let mut summary = mode_json(mode);
    summary["cached"] = json!(ran.is_none());
    Ok((c, summary))
}
