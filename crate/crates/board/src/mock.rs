//! A stand-in prover endpoint for tests and demos. It speaks just enough
//! HTTP/1.1 to answer form posts from [`crate::external`].

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use holboard_core::tptp::SzsStatus;
use parking_lot::Mutex;

type Log = Arc<Mutex<Vec<Vec<(String, String)>>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Behavior {
    /// Replies with a status line followed by a short transcript.
    Status(SzsStatus),
    /// Replies with this exact text.
    Reply(String),
    /// Never replies; the connection stays open until shutdown.
    Hang,
}

/// A running mock endpoint. Stops when dropped.
pub struct MockProver {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    requests: Log,
    handle: Option<JoinHandle<()>>,
}

impl MockProver {
    pub fn start(behavior: Behavior) -> std::io::Result<MockProver> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let requests = Arc::new(Mutex::new(Vec::new()));
        let handle = {
            let stop = stop.clone();
            let requests = requests.clone();
            std::thread::spawn(move || serve(listener, behavior, stop, requests))
        };
        Ok(MockProver {
            addr,
            stop,
            requests,
            handle: Some(handle),
        })
    }

    pub fn url(&self) -> String {
        format!("http://{}/SystemOnTPTPFormReply", self.addr)
    }

    /// Decoded form fields of every request received so far.
    pub fn requests(&self) -> Vec<Vec<(String, String)>> {
        self.requests.lock().clone()
    }
}

impl Drop for MockProver {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn serve(listener: TcpListener, behavior: Behavior, stop: Arc<AtomicBool>, requests: Log) {
    let mut workers = Vec::new();
    while !stop.load(Ordering::SeqCst) {
        match listener.accept() {
            Ok((stream, _)) => {
                let behavior = behavior.clone();
                let stop = stop.clone();
                let requests = requests.clone();
                workers.push(std::thread::spawn(move || {
                    let _ = handle(stream, &behavior, &stop, &requests);
                }));
            }
            Err(_) => std::thread::sleep(Duration::from_millis(5)),
        }
    }
    for w in workers {
        let _ = w.join();
    }
}

fn handle(
    stream: TcpStream,
    behavior: &Behavior,
    stop: &AtomicBool,
    requests: &Mutex<Vec<Vec<(String, String)>>>,
) -> std::io::Result<()> {
    stream.set_nonblocking(false)?;
    stream.set_read_timeout(Some(Duration::from_secs(5)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut length = 0usize;
    let mut line = String::new();
    reader.read_line(&mut line)?;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        let header = line.trim_end();
        if header.is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body)?;
    let fields: Vec<(String, String)> = url::form_urlencoded::parse(&body).into_owned().collect();
    requests.lock().push(fields);
    let text = match behavior {
        Behavior::Status(s) => format!("{} for problem\n% mock prover finished\n", s.line()),
        Behavior::Reply(text) => text.clone(),
        Behavior::Hang => {
            while !stop.load(Ordering::SeqCst) {
                std::thread::sleep(Duration::from_millis(10));
            }
            return Ok(());
        }
    };
    let mut out = stream;
    write!(
        out,
        "HTTP/1.1 200 OK\r\nContent-Type: text/plain; charset=utf-8\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        text.len(),
        text
    )?;
    out.flush()
}
