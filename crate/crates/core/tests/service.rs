use std::io::{Read, Write};
use std::net::TcpStream;
use std::thread;

use qpmut::catalog;
use qpmut::cli::serve::{bind, serve, Session};
use qpmut::Rational;
use serde_json::{json, Value};

struct Client {
    addr: String,
}

impl Client {
    fn call(&self, method: &str, path: &str, body: Option<Value>) -> (u16, Value) {
        let body = body.map(|b| b.to_string()).unwrap_or_default();
        let mut s = TcpStream::connect(&self.addr).unwrap();
        write!(
            s,
            "{method} {path} HTTP/1.1\r\nHost: test\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
            body.len()
        )
        .unwrap();
        let mut raw = String::new();
        s.read_to_string(&mut raw).unwrap();
        let status = raw.split_whitespace().nth(1).unwrap().parse().unwrap();
        let payload = raw.split_once("\r\n\r\n").map(|(_, b)| b).unwrap_or("");
        let value = if payload.trim().is_empty() {
            Value::Null
        } else {
            serde_json::from_str(payload).unwrap()
        };
        (status, value)
    }
}

fn start() -> (
    Client,
    std::sync::Arc<tiny_http::Server>,
    thread::JoinHandle<()>,
) {
    let server = bind("127.0.0.1", 0).unwrap();
    let addr = server.server_addr().to_ip().unwrap().to_string();
    let qp = catalog::four_cycle::<Rational>(6).unwrap();
    let handle = {
        let server = server.clone();
        thread::spawn(move || {
            let mut session = Session::new("four_cycle", qp, 0);
            serve(&server, &mut session, None);
        })
    };
    (Client { addr }, server, handle)
}

fn arrow_names(state: &Value) -> Vec<String> {
    let mut v: Vec<String> = state["qp"]["quiver"]["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap().to_string())
        .collect();
    v.sort();
    v
}

#[test]
fn click_through_and_undo_over_http() {
    let (c, server, handle) = start();
    let (status, initial) = c.call("GET", "/state", None);
    assert_eq!(status, 200);
    assert_eq!(initial["schema"], 1);

    let (status, _) = c.call("POST", "/mutate", Some(json!({ "vertex": 2 })));
    assert_eq!(status, 200);
    let (status, after) = c.call("POST", "/mutate", Some(json!({ "vertex": 3 })));
    assert_eq!(status, 200);
    assert_eq!(arrow_names(&after).len(), 3);
    assert_eq!(after["qp"]["potential"], json!([]));

    for _ in 0..2 {
        assert_eq!(c.call("POST", "/undo", None).0, 200);
    }
    let (_, restored) = c.call("GET", "/state", None);
    assert_eq!(restored, initial);
    assert_eq!(c.call("POST", "/undo", None).0, 409);

    server.unblock();
    handle.join().unwrap();
}

#[test]
fn rejected_requests_keep_the_state() {
    let (c, server, handle) = start();
    let (_, before) = c.call("GET", "/state", None);
    assert_eq!(
        c.call("POST", "/mutate", Some(json!({ "vertex": 9 }))).0,
        400
    );
    assert_eq!(
        c.call("POST", "/mutate", Some(json!({ "vertex": "x" }))).0,
        400
    );
    assert_eq!(
        c.call("POST", "/load", Some(json!({ "catalog": "nope" })))
            .0,
        404
    );
    assert_eq!(c.call("GET", "/mutate", None).0, 405);
    assert_eq!(c.call("GET", "/elsewhere", None).0, 404);
    assert_eq!(c.call("GET", "/state", None).1, before);

    let (status, loaded) = c.call(
        "POST",
        "/load",
        Some(json!({ "catalog": "cyclic_triangle", "coeffs": ["0", "1"] })),
    );
    assert_eq!(status, 200, "{loaded}");
    assert_eq!(
        c.call("POST", "/mutate", Some(json!({ "vertex": 2 }))).0,
        200
    );
    let (status, err) = c.call("POST", "/mutate", Some(json!({ "vertex": 1 })));
    assert_eq!(status, 409, "{err}");

    server.unblock();
    handle.join().unwrap();
}

#[test]
fn representations_over_http() {
    let (c, server, handle) = start();
    let (status, v) = c.call(
        "POST",
        "/load",
        Some(json!({ "catalog": "double_triangle", "reps": ["band:2,1", "band:1,1"] })),
    );
    assert_eq!(status, 200, "{v}");
    let (_, reps) = c.call("GET", "/reps", None);
    assert_eq!(reps["schema"], 1);
    let id = reps["reps"][0]["id"].as_u64().unwrap();
    let (status, out) = c.call("POST", "/repmutate", Some(json!({ "id": id, "vertex": 2 })));
    assert_eq!(status, 200, "{out}");
    let (_, reps) = c.call("GET", "/reps", None);
    assert_eq!(reps["reps"][0]["rep"]["m"], json!([2, 1, 1]));
    assert_eq!(
        c.call("POST", "/repmutate", Some(json!({ "id": 99, "vertex": 2 })))
            .0,
        404
    );
    assert_eq!(c.call("POST", "/undo", None).0, 200);
    let (_, reps) = c.call("GET", "/reps", None);
    assert_eq!(reps["reps"][0]["rep"]["m"], json!([2, 3, 1]));

    server.unblock();
    handle.join().unwrap();
}
