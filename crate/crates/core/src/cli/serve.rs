//! Single-session HTTP service: one current QP with a snapshot history, plus
//! a list of loaded representations.
//!
//! | method | path         | body                                   |
//! |--------|--------------|----------------------------------------|
//! | GET    | `/state`     |                                        |
//! | POST   | `/mutate`    | `{"vertex": 2}`                        |
//! | POST   | `/undo`      |                                        |
//! | POST   | `/load`      | `{"catalog": "grid", "n": 2}` or `{"qp": ...}`, optional `"reps"` |
//! | GET    | `/reps`      |                                        |
//! | POST   | `/repmutate` | `{"id": 0, "vertex": 2}`               |
//!
//! Failed requests answer 4xx with `{"schema": 1, "error": "..."}` and leave
//! the session untouched.

use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};

use super::json::{
    dims_value, qp_from_value, qp_value, rep_from_value, rep_value, two_cycle_vertices, SCHEMA,
};
use crate::catalog::{self, Params};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::Qp;
use crate::mutation::mutate;
use crate::quiver::Vertex;
use crate::rep_mutation::mutate_rep;
use crate::reps::{parse_rep, DecoratedRep};

#[derive(Clone, Debug)]
pub struct StoredRep<F> {
    pub id: usize,
    pub name: String,
    pub rep: DecoratedRep<F>,
    pub history: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Mutate(Vertex),
    RepMutate { id: usize, vertex: Vertex },
}

#[derive(Clone, Debug)]
struct Snapshot<F> {
    qp: Qp<F>,
    reps: Vec<StoredRep<F>>,
}

#[derive(Clone, Debug)]
pub struct HistoryEntry<F> {
    pub action: Action,
    pub degenerate: bool,
    before: Snapshot<F>,
}

#[derive(Clone, Debug)]
pub struct Session<F> {
    pub name: String,
    pub initial: Qp<F>,
    pub current: Qp<F>,
    pub history: Vec<HistoryEntry<F>>,
    pub reps: Vec<StoredRep<F>>,
    pub trunc: usize,
    pub seed: u64,
}

/// An HTTP status with a message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub status: u16,
    pub message: String,
}

impl Rejection {
    fn new(status: u16, message: impl Into<String>) -> Self {
        Rejection {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Rejection {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::TwoCycleThroughVertex(_) => 409,
            Error::UnknownCatalog(_) => 404,
            _ => 400,
        };
        Rejection::new(status, e.to_string())
    }
}

type Reply = std::result::Result<Value, Rejection>;

fn vertex_field(body: &Value, key: &str) -> std::result::Result<Vertex, Rejection> {
    body.get(key)
        .and_then(Value::as_u64)
        .and_then(|v| Vertex::try_from(v).ok())
        .ok_or_else(|| Rejection::new(400, format!("expected integer field `{key}`")))
}

impl<F: Field> Session<F> {
    pub fn new(name: impl Into<String>, qp: Qp<F>, seed: u64) -> Self {
        Session {
            name: name.into(),
            trunc: qp.trunc(),
            initial: qp.clone(),
            current: qp,
            history: Vec::new(),
            reps: Vec::new(),
            seed,
        }
    }

    pub fn state(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "name": self.name,
            "qp": qp_value(&self.current),
            "blocked_vertices": two_cycle_vertices(self.current.quiver()),
            "history": self.history.iter().map(|h| match h.action {
                Action::Mutate(k) => json!({ "action": "mutate", "vertex": k, "degenerate": h.degenerate }),
                Action::RepMutate { id, vertex } => json!({ "action": "repmutate", "id": id, "vertex": vertex, "degenerate": h.degenerate }),
            }).collect::<Vec<_>>(),
            "reps": self.reps.iter().map(|r| json!({ "id": r.id, "name": r.name, "m": r.rep.m_dims(), "v": r.rep.v_dims() })).collect::<Vec<_>>(),
            "trunc": self.trunc,
            "seed": self.seed,
        })
    }

    pub fn reps_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "reps": self.reps.iter().map(|r| json!({
                "id": r.id,
                "name": r.name,
                "history": r.history,
                "qp": qp_value(r.rep.qp()),
                "rep": rep_value(&r.rep),
            })).collect::<Vec<_>>(),
        })
    }

    fn snapshot(&self) -> Snapshot<F> {
        Snapshot {
            qp: self.current.clone(),
            reps: self.reps.clone(),
        }
    }

    pub fn mutate(&mut self, k: Vertex) -> Reply {
        let m = mutate(&self.current, k)?;
        let before = self.snapshot();
        self.current = m.mutated;
        self.history.push(HistoryEntry {
            action: Action::Mutate(k),
            degenerate: m.degenerate,
            before,
        });
        let mut out = self.state();
        out["degenerate"] = json!(m.degenerate);
        Ok(out)
    }

    pub fn undo(&mut self) -> Reply {
        let entry = self
            .history
            .pop()
            .ok_or_else(|| Rejection::new(409, "nothing to undo"))?;
        self.current = entry.before.qp;
        self.reps = entry.before.reps;
        Ok(self.state())
    }

    pub fn rep_mutate(&mut self, id: usize, k: Vertex) -> Reply {
        let ix = self
            .reps
            .iter()
            .position(|r| r.id == id)
            .ok_or_else(|| Rejection::new(404, format!("no representation with id {id}")))?;
        let out = mutate_rep(&self.reps[ix].rep, k)?;
        let degenerate = !out.quiver().is_two_acyclic();
        let before = self.snapshot();
        let stored = &mut self.reps[ix];
        stored.rep = out;
        stored.history.push(k);
        self.history.push(HistoryEntry {
            action: Action::RepMutate { id, vertex: k },
            degenerate,
            before,
        });
        Ok(self.reps_value())
    }

    /// Replaces the session. On any error nothing changes.
    pub fn load(&mut self, body: &Value) -> Reply {
        let trunc = match body.get("trunc") {
            Some(t) => t
                .as_u64()
                .ok_or_else(|| Rejection::new(400, "`trunc` must be an integer"))?
                as usize,
            None => self.trunc,
        };
        let (name, qp) = if let Some(name) = body.get("catalog") {
            let name = name
                .as_str()
                .ok_or_else(|| Rejection::new(400, "`catalog` must be a string"))?;
            let mut params = Params::default();
            if let Some(n) = body.get("n") {
                params.n = Some(
                    n.as_u64()
                        .ok_or_else(|| Rejection::new(400, "`n` must be an integer"))?
                        as usize,
                );
            }
            if let Some(c) = body.get("coeffs") {
                let list = c
                    .as_array()
                    .ok_or_else(|| Rejection::new(400, "`coeffs` must be an array"))?;
                params.coeffs = Some(
                    list.iter()
                        .map(|x| match x {
                            Value::String(s) => F::parse(s),
                            Value::Number(n) => F::parse(&n.to_string()),
                            _ => Err(Error::Parse("coefficients are strings or integers".into())),
                        })
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            (
                name.to_string(),
                catalog::make_qp::<F>(name, &params, trunc)?,
            )
        } else if let Some(qp) = body.get("qp") {
            let qp = match qp {
                Value::String(text) => Qp::parse(text, trunc, body.get("trunc").map(|_| trunc))?,
                other => qp_from_value(other)?,
            };
            ("custom".to_string(), qp)
        } else {
            return Err(Rejection::new(400, "expected `catalog` or `qp`"));
        };
        let mut reps = Vec::new();
        if let Some(list) = body.get("reps") {
            let list = list
                .as_array()
                .ok_or_else(|| Rejection::new(400, "`reps` must be an array"))?;
            for (id, spec) in list.iter().enumerate() {
                let (name, rep) = rep_from_spec(&qp, spec)?;
                reps.push(StoredRep {
                    id,
                    name,
                    rep,
                    history: Vec::new(),
                });
            }
        }
        let seed = self.seed;
        *self = Session::new(name, qp, seed);
        self.reps = reps;
        Ok(self.state())
    }

    /// Routes one request.
    pub fn handle(&mut self, method: &str, path: &str, body: &str) -> (u16, Value) {
        let parsed = || -> std::result::Result<Value, Rejection> {
            if body.trim().is_empty() {
                return Ok(json!({}));
            }
            serde_json::from_str(body)
                .map_err(|e| Rejection::new(400, format!("invalid JSON: {e}")))
        };
        let path = path.split('?').next().unwrap_or(path);
        let reply = match (method, path) {
            ("GET", "/state") => Ok(self.state()),
            ("GET", "/reps") => Ok(self.reps_value()),
            ("GET", "/jdim") => Ok(dims_value(
                "jacobian",
                &crate::jacobian::jacobian_dim(&self.current),
            )),
            ("POST", "/mutate") => parsed()
                .and_then(|b| vertex_field(&b, "vertex"))
                .and_then(|k| self.mutate(k)),
            ("POST", "/undo") => self.undo(),
            ("POST", "/load") => parsed().and_then(|b| self.load(&b)),
            ("POST", "/repmutate") => parsed().and_then(|b| {
                let id = b
                    .get("id")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Rejection::new(400, "expected integer field `id`"))?;
                let k = vertex_field(&b, "vertex")?;
                self.rep_mutate(id as usize, k)
            }),
            (_, "/state" | "/reps" | "/jdim" | "/mutate" | "/undo" | "/load" | "/repmutate") => {
                Err(Rejection::new(405, "method not allowed"))
            }
            _ => Err(Rejection::new(404, format!("no route {path}"))),
        };
        match reply {
            Ok(v) => (200, v),
            Err(r) => (r.status, json!({ "schema": SCHEMA, "error": r.message })),
        }
    }
}

/// Representation from a load request entry: `"band:m,n"`, `"a3:i"`
/// (1-based, in the order of [`catalog::a3_indecomposables`]), `"simple:k"`,
/// `"negative_simple:k"`, rep text, or a structured rep object.
pub fn rep_from_spec<F: Field>(qp: &Qp<F>, spec: &Value) -> Result<(String, DecoratedRep<F>)> {
    match spec {
        Value::String(s) => {
            let s = s.trim();
            let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
            let ints = || -> Result<Vec<usize>> {
                arg.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad number in `{s}`")))
                    })
                    .collect()
            };
            let rep = match kind {
                "band" => match ints()?.as_slice() {
                    [m, n] => catalog::band_rep(qp, *m, *n)?,
                    _ => return Err(Error::InvalidParams("band needs `m,n`".into())),
                },
                "a3" => {
                    let i = *ints()?
                        .first()
                        .ok_or_else(|| Error::InvalidParams("a3 needs an index".into()))?;
                    let all = catalog::a3_indecomposables(qp)?;
                    all.get(i.wrapping_sub(1)).cloned().ok_or_else(|| {
                        Error::InvalidParams(format!("a3 index {i} outside 1..=6"))
                    })?
                }
                "simple" => DecoratedRep::simple(qp, ints()?[0] as Vertex)?,
                "negative_simple" => DecoratedRep::negative_simple(qp, ints()?[0] as Vertex)?,
                _ => {
                    let rep = parse_rep(qp, s)?;
                    return Ok(("custom".into(), rep));
                }
            };
            Ok((s.to_string(), rep))
        }
        other => Ok(("custom".into(), rep_from_value(qp, other)?)),
    }
}

pub fn bind(host: &str, port: u16) -> Result<Arc<tiny_http::Server>> {
    tiny_http::Server::http((host, port))
        .map(Arc::new)
        .map_err(|e| Error::Io(format!("cannot listen on {host}:{port}: {e}")))
}

/// Serves requests until the server is unblocked. Requests are handled one
/// at a time. With `save`, the state is written there after every change.
pub fn serve<F: Field>(
    server: &tiny_http::Server,
    session: &mut Session<F>,
    save: Option<&PathBuf>,
) {
    let json_header =
        tiny_http::Header::from_bytes("Content-Type", "application/json").expect("header");
    let cors = [
        tiny_http::Header::from_bytes("Access-Control-Allow-Origin", "*").expect("header"),
        tiny_http::Header::from_bytes("Access-Control-Allow-Headers", "Content-Type")
            .expect("header"),
        tiny_http::Header::from_bytes("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            .expect("header"),
    ];
    for mut request in server.incoming_requests() {
        let method = request.method().as_str().to_ascii_uppercase();
        let url = request.url().to_string();
        let mut body = String::new();
        let (status, value) = if method == "OPTIONS" {
            (204, Value::Null)
        } else if std::io::Read::read_to_string(request.as_reader(), &mut body).is_err() {
            (400, json!({ "schema": SCHEMA, "error": "unreadable body" }))
        } else {
            session.handle(&method, &url, &body)
        };
        if status == 200 && method == "POST" {
            if let Some(path) = save {
                if let Err(e) = std::fs::write(path, session.state().to_string()) {
                    eprintln!("warning: cannot save state to {}: {e}", path.display());
                }
            }
        }
        let text = if value.is_null() {
            String::new()
        } else {
            value.to_string()
        };
        let mut response = tiny_http::Response::from_string(text).with_status_code(status);
        response.add_header(json_header.clone());
        for h in &cors {
            response.add_header(h.clone());
        }
        let _ = request.respond(response);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn session() -> Session<Rational> {
        Session::new("four_cycle", catalog::four_cycle(6).unwrap(), 0)
    }

    fn arrow_names(v: &Value) -> Vec<String> {
        v["qp"]["quiver"]["arrows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a["name"].as_str().unwrap().to_string())
            .collect()
    }

    #[test]
    fn mutate_and_undo() {
        let mut s = session();
        let (_, start) = s.handle("GET", "/state", "");
        let (status, after) = s.handle("POST", "/mutate", r#"{"vertex": 2}"#);
        assert_eq!(status, 200);
        let mut names = arrow_names(&after);
        names.sort();
        let mut want = vec!["a⋆", "b⋆", "c", "d", "[b.a]"];
        want.sort();
        assert_eq!(names, want);
        let (status, undone) = s.handle("POST", "/undo", "");
        assert_eq!(status, 200);
        assert_eq!(undone, start);
        assert_eq!(s.handle("POST", "/undo", "").0, 409);
    }

    #[test]
    fn errors_leave_state_alone() {
        let mut s = session();
        let (_, start) = s.handle("GET", "/state", "");
        assert_eq!(s.handle("POST", "/mutate", r#"{"vertex": 9}"#).0, 400);
        assert_eq!(s.handle("POST", "/mutate", "{").0, 400);
        assert_eq!(s.handle("POST", "/load", r#"{"catalog": "nope"}"#).0, 404);
        assert_eq!(s.handle("DELETE", "/state", "").0, 405);
        assert_eq!(s.handle("GET", "/elsewhere", "").0, 404);
        assert_eq!(s.handle("GET", "/state", "").1, start);
        s.handle(
            "POST",
            "/load",
            r#"{"catalog": "cyclic_triangle", "coeffs": ["0", "1"], "trunc": 8}"#,
        );
        let (status, v) = s.handle("POST", "/mutate", r#"{"vertex": 2}"#);
        assert_eq!(status, 200);
        assert_eq!(v["degenerate"], true);
        assert_eq!(v["blocked_vertices"], json!([1, 3]));
        let (_, before) = s.handle("GET", "/state", "");
        let (status, err) = s.handle("POST", "/mutate", r#"{"vertex": 1}"#);
        assert_eq!(status, 409);
        assert_eq!(err["schema"], 1);
        assert_eq!(s.handle("GET", "/state", "").1, before);
    }

    #[test]
    fn history_replays() {
        let mut s: Session<Rational> =
            Session::new("double_triangle", catalog::double_triangle(5).unwrap(), 0);
        for k in [2, 1, 3, 2] {
            assert_eq!(
                s.handle("POST", "/mutate", &json!({ "vertex": k }).to_string())
                    .0,
                200
            );
        }
        let mut replay = s.initial.clone();
        for h in &s.history {
            if let Action::Mutate(k) = h.action {
                replay = mutate(&replay, k).unwrap().mutated;
            }
        }
        assert_eq!(replay, s.current);
    }

    #[test]
    fn reps_mutate_and_undo() {
        let mut s = session();
        let (status, _) = s.handle(
            "POST",
            "/load",
            r#"{"catalog": "double_triangle", "reps": ["band:1,0", "band:2,1"]}"#,
        );
        assert_eq!(status, 200);
        let (_, reps) = s.handle("GET", "/reps", "");
        assert_eq!(reps["reps"][1]["rep"]["m"], json!([2, 3, 1]));
        let (status, reps) = s.handle("POST", "/repmutate", r#"{"id": 1, "vertex": 2}"#);
        assert_eq!(status, 200);
        assert_eq!(reps["reps"][1]["rep"]["m"], json!([2, 1, 1]));
        assert_eq!(
            s.handle("POST", "/repmutate", r#"{"id": 7, "vertex": 2}"#)
                .0,
            404
        );
        s.handle("POST", "/undo", "");
        let (_, reps) = s.handle("GET", "/reps", "");
        assert_eq!(reps["reps"][1]["rep"]["m"], json!([2, 3, 1]));
    }

    #[test]
    fn load_structured_qp() {
        let mut s = session();
        let qp = qp_value(&catalog::grid::<Rational>(2, 5).unwrap());
        let (status, v) = s.handle("POST", "/load", &json!({ "qp": qp }).to_string());
        assert_eq!(status, 200);
        assert_eq!(v["qp"], qp);
    }
}
