//! The on-disk store.
//!
//! ```text
//! <data-dir>/
//!   exercises/<name>.json    exercise packs, loaded at startup after the built-in corpus
//!   sessions/<id>.jsonl      one append-only log per session
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use ndlab_core::corpus;
use ndlab_core::exercise::{ExercisePack, ExerciseSpec, View};
use ndlab_core::generate::{generate, GeneratorConfig};
use ndlab_core::kernel::{check_tree, tree_to_json, tree_to_text, Verdict};
use ndlab_core::tactic::{parse_command, Command, ProofStatus, Runner};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::session::{execute, replay, script_of, Event, ReplayLog, SessionHeader, SessionView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportForm {
    Script,
    Tree,
    Movie,
}

impl std::str::FromStr for ExportForm {
    type Err = ServiceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "script" => Ok(ExportForm::Script),
            "tree" => Ok(ExportForm::Tree),
            "movie" => Ok(ExportForm::Movie),
            _ => Err(ServiceError::BadRequest(format!("unknown export form `{s}`"))),
        }
    }
}

/// The full history: every event, rejected ones included, and the frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Movie {
    pub session_id: String,
    pub exercise_id: String,
    pub events: Vec<Event>,
    pub frames: Vec<crate::session::Frame>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Export {
    Script(String),
    /// `{"tree": <JSON tree>, "text": <indented text>}`
    Tree(serde_json::Value),
    Movie(Movie),
}

/// A session file read back from disk.
#[derive(Clone, Debug)]
pub struct SessionFile {
    pub header: SessionHeader,
    pub exercise: ExerciseSpec,
    pub events: Vec<Event>,
}

impl SessionFile {
    pub fn read(path: &Path) -> Result<Self, ServiceError> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let corrupt = |ordinal: u64, reason: String| ServiceError::CorruptLog { ordinal, reason };
        let first = lines.next().ok_or_else(|| corrupt(0, "empty session file".into()))??;
        let header: SessionHeader = serde_json::from_str(&first).map_err(|e| corrupt(0, format!("bad header: {e}")))?;
        let exercise = ExerciseSpec::from_json(&header.exercise)?;
        let mut events = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let n = events.len() as u64;
            events.push(serde_json::from_str(&line).map_err(|e| corrupt(n, format!("bad event: {e}")))?);
        }
        Ok(SessionFile { header, exercise, events })
    }

    pub fn replay(&self) -> Result<(ReplayLog, Runner), ServiceError> {
        replay(&self.header.id, &self.exercise, &self.events)
    }
}

struct Live {
    header: SessionHeader,
    exercise: ExerciseSpec,
    events: Vec<Event>,
    runner: Runner,
    path: PathBuf,
    len: u64,
}

impl Live {
    /// Appends one line; on failure the file is cut back to its old length.
    fn append(&mut self, event: &Event) -> Result<(), ServiceError> {
        let mut line = serde_json::to_vec(event).map_err(|e| ServiceError::Persistence(e.to_string()))?;
        line.push(b'\n');
        let mut f = OpenOptions::new().append(true).open(&self.path)?;
        if let Err(e) = f.write_all(&line).and_then(|_| f.sync_data()) {
            let _ = f.set_len(self.len);
            return Err(e.into());
        }
        self.len += line.len() as u64;
        Ok(())
    }

    fn replay(&self) -> Result<ReplayLog, ServiceError> {
        let file = SessionFile::read(&self.path)?;
        let (log, runner) = file.replay()?;
        if runner.state() != self.runner.state() || runner.status() != self.runner.status() {
            return Err(ServiceError::CorruptLog {
                ordinal: file.events.len() as u64,
                reason: "the log does not end in the live state".into(),
            });
        }
        Ok(log)
    }

    fn view(&self) -> SessionView {
        SessionView::new(&self.header, &self.exercise, &self.runner, &self.events)
    }
}

pub struct Store {
    root: PathBuf,
    exercises: RwLock<BTreeMap<String, ExerciseSpec>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<Live>>>>,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Store {
    /// Opens (creating if needed) a data directory and loads its exercise packs.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let root = root.into();
        fs::create_dir_all(root.join("exercises"))?;
        fs::create_dir_all(root.join("sessions"))?;
        let mut exercises: BTreeMap<String, ExerciseSpec> =
            corpus::pack().exercises.iter().map(|e| (e.id.clone(), e.clone())).collect();
        let mut files: Vec<PathBuf> = fs::read_dir(root.join("exercises"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for path in files {
            let pack = ExercisePack::from_json_str(&fs::read_to_string(&path)?)?;
            for e in pack.exercises {
                match exercises.get(&e.id) {
                    Some(old) if *old != e => {
                        return Err(ServiceError::BadRequest(format!(
                            "{}: exercise id `{}` is already taken",
                            path.display(),
                            e.id
                        )))
                    }
                    _ => {
                        exercises.insert(e.id.clone(), e);
                    }
                }
            }
        }
        Ok(Store {
            root,
            exercises: RwLock::new(exercises),
            sessions: Mutex::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn session_path(&self, id: &str) -> PathBuf {
        self.root.join("sessions").join(format!("{id}.jsonl"))
    }

    pub fn exercises(&self) -> Vec<ExerciseSpec> {
        self.exercises.read().unwrap().values().cloned().collect()
    }

    pub fn exercise(&self, id: &str) -> Result<ExerciseSpec, ServiceError> {
        self.exercises
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NoSuchExercise(id.to_string()))
    }

    /// Generates an exercise, stores it as a one-exercise pack and returns it.
    pub fn generate(&self, config: &GeneratorConfig) -> Result<ExerciseSpec, ServiceError> {
        let spec = generate(config)?;
        let pack = ExercisePack {
            name: spec.id.clone(),
            exercises: vec![spec.clone()],
        };
        let path = self.root.join("exercises").join(format!("{}.json", spec.id));
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, pack.to_json_string(View::Instructor))?;
        fs::rename(&tmp, &path)?;
        self.exercises.write().unwrap().insert(spec.id.clone(), spec.clone());
        Ok(spec)
    }

    pub fn create_session(&self, exercise_id: &str, student_id: &str) -> Result<SessionView, ServiceError> {
        let exercise = self.exercise(exercise_id)?;
        let runner = Runner::new(exercise.clone()).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let header = SessionHeader {
            id: id.clone(),
            exercise_id: exercise_id.to_string(),
            student_id: student_id.to_string(),
            created: now(),
            exercise: exercise.to_json(View::Instructor),
        };
        let path = self.session_path(&id);
        let mut line = serde_json::to_vec(&header).map_err(|e| ServiceError::Persistence(e.to_string()))?;
        line.push(b'\n');
        let mut f = OpenOptions::new().write(true).create_new(true).open(&path)?;
        f.write_all(&line)?;
        f.sync_all()?;
        let live = Live {
            header,
            exercise,
            events: Vec::new(),
            runner,
            path,
            len: line.len() as u64,
        };
        let view = live.view();
        self.sessions.lock().unwrap().insert(id, Arc::new(Mutex::new(live)));
        Ok(view)
    }

    /// The live session, loading and replaying its log on first access.
    fn live(&self, id: &str) -> Result<Arc<Mutex<Live>>, ServiceError> {
        if let Some(l) = self.sessions.lock().unwrap().get(id) {
            return Ok(l.clone());
        }
        let path = self.session_path(id);
        if !valid_id(id) || !path.exists() {
            return Err(ServiceError::NoSuchSession(id.to_string()));
        }
        let file = SessionFile::read(&path)?;
        let (_, runner) = file.replay()?;
        let live = Arc::new(Mutex::new(Live {
            header: file.header,
            exercise: file.exercise,
            events: file.events,
            runner,
            len: fs::metadata(&path)?.len(),
            path,
        }));
        Ok(self.sessions.lock().unwrap().entry(id.to_string()).or_insert(live).clone())
    }

    pub fn session(&self, id: &str) -> Result<SessionView, ServiceError> {
        Ok(self.live(id)?.lock().unwrap().view())
    }

    /// Executes one command and appends its event, accepted or rejected.
    /// Only `undo` is taken once the session is closed.
    pub fn apply_command(&self, id: &str, command: &str) -> Result<Event, ServiceError> {
        let live = self.live(id)?;
        let mut s = live.lock().unwrap();
        if s.runner.status() != ProofStatus::Open {
            let undo = matches!(parse_command(command, &s.exercise.signature), Ok(Some(Command::Undo)));
            if !undo {
                return Err(ServiceError::SessionClosed(s.runner.status().into()));
            }
        }
        let mut next = s.runner.clone();
        let event = execute(&mut next, s.events.len() as u64, now(), command);
        s.append(&event)?;
        s.runner = next;
        s.events.push(event.clone());
        Ok(event)
    }

    pub fn undo(&self, id: &str) -> Result<Event, ServiceError> {
        self.apply_command(id, "undo")
    }

    /// Replays the persisted log and checks it ends in the live state.
    pub fn replay(&self, id: &str) -> Result<ReplayLog, ServiceError> {
        self.live(id)?.lock().unwrap().replay()
    }

    pub fn export(&self, id: &str, form: ExportForm) -> Result<Export, ServiceError> {
        match form {
            ExportForm::Script => {
                let live = self.live(id)?;
                let s = live.lock().unwrap();
                Ok(Export::Script(script_of(&s.events)))
            }
            ExportForm::Tree => {
                let live = self.live(id)?;
                let s = live.lock().unwrap();
                let tree = match (s.runner.status(), s.runner.proof_tree()) {
                    (ProofStatus::Proved, Some(t)) => t.clone(),
                    _ => return Err(ServiceError::ProofIncomplete),
                };
                if let Verdict::FirstViolation { path, reason } =
                    check_tree(&tree, &s.exercise.sequent, &s.exercise.definitions)
                {
                    return Err(ServiceError::CorruptLog {
                        ordinal: s.events.len() as u64,
                        reason: format!("the stored proof fails the checker at {path:?}: {reason}"),
                    });
                }
                Ok(Export::Tree(serde_json::json!({
                    "tree": tree_to_json(&tree),
                    "text": tree_to_text(&tree),
                })))
            }
            ExportForm::Movie => {
                let live = self.live(id)?;
                let s = live.lock().unwrap();
                let log = s.replay()?;
                Ok(Export::Movie(Movie {
                    session_id: s.header.id.clone(),
                    exercise_id: s.header.exercise_id.clone(),
                    events: s.events.clone(),
                    frames: log.frames,
                }))
            }
        }
    }

    /// Hash of the live proof state; used to compare against replays.
    pub fn live_hash(&self, id: &str) -> Result<String, ServiceError> {
        Ok(self.live(id)?.lock().unwrap().runner.state().structural_hash())
    }
}
