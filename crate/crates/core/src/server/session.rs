//! Transports between the game loop and its agents.

use std::io::{self, BufRead, BufReader, ErrorKind, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::protocol::{decode_message, encode_message, Malformed, Message};
use crate::agent::Agent;
use crate::auction::{AgentId, GameTime};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("agent did not answer within {0:?}")]
    Timeout(Duration),
    #[error("agent disconnected")]
    Disconnected,
    #[error("cannot reach agent at {addr}")]
    Connect { addr: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Malformed(#[from] Malformed),
    #[error("protocol violation: {0}")]
    Protocol(String),
}

/// The server's handle on one seated agent.
pub trait Session: Send {
    fn name(&self) -> &str;
    /// Delivers one turn's messages, ending with a `tick`.
    fn send(&mut self, batch: Vec<Message>) -> Result<(), SessionError>;
    /// Collects the agent's requests for the turn at `time`.
    fn receive(&mut self, time: GameTime) -> Result<Vec<Message>, SessionError>;
}

/// An agent running inside the server process.
pub struct LocalSession {
    name: String,
    agent: Box<dyn Agent>,
    replies: Vec<Message>,
}

impl LocalSession {
    pub fn new(agent: Box<dyn Agent>) -> Self {
        LocalSession { name: agent.name().to_string(), agent, replies: Vec::new() }
    }
}

impl Session for LocalSession {
    fn name(&self) -> &str {
        &self.name
    }

    fn send(&mut self, batch: Vec<Message>) -> Result<(), SessionError> {
        let mut out = self.agent.handle(&batch);
        self.replies.append(&mut out);
        Ok(())
    }

    fn receive(&mut self, _time: GameTime) -> Result<Vec<Message>, SessionError> {
        Ok(std::mem::take(&mut self.replies))
    }
}

/// An agent on the other end of a TCP connection.
pub struct TcpSession {
    name: String,
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    grace: Duration,
}

impl TcpSession {
    /// Dials an agent that is listening at `addr`.
    pub fn connect(addr: &str, seat: AgentId, grace: Duration) -> Result<Self, SessionError> {
        let connect_err = |source| SessionError::Connect { addr: addr.to_string(), source };
        let sock = addr
            .to_socket_addrs()
            .map_err(connect_err)?
            .next()
            .ok_or_else(|| connect_err(io::Error::new(ErrorKind::NotFound, "no address")))?;
        let stream = TcpStream::connect_timeout(&sock, grace).map_err(connect_err)?;
        Self::handshake(stream, seat, grace)
    }

    /// Waits for an agent to dial in on `listener`.
    pub fn accept(listener: &TcpListener, seat: AgentId, grace: Duration) -> Result<Self, SessionError> {
        let (stream, _) = listener.accept()?;
        Self::handshake(stream, seat, grace)
    }

    fn handshake(stream: TcpStream, seat: AgentId, grace: Duration) -> Result<Self, SessionError> {
        stream.set_nodelay(true)?;
        let writer = stream.try_clone()?;
        let mut s = TcpSession { name: String::new(), reader: BufReader::new(stream), writer, grace };
        let deadline = Instant::now() + grace;
        match s.read_message(deadline)? {
            Message::Join { agent_name } => s.name = agent_name,
            other => return Err(SessionError::Protocol(format!("expected join, got {other:?}"))),
        }
        s.write_all(&[Message::Joined { agent_id: seat }])?;
        Ok(s)
    }

    fn write_all(&mut self, msgs: &[Message]) -> Result<(), SessionError> {
        let mut buf = String::new();
        for m in msgs {
            buf.push_str(&encode_message(m));
            buf.push('\n');
        }
        self.writer.write_all(buf.as_bytes())?;
        self.writer.flush()?;
        Ok(())
    }

    fn read_message(&mut self, deadline: Instant) -> Result<Message, SessionError> {
        let mut line = String::new();
        loop {
            let now = Instant::now();
            if now >= deadline {
                return Err(SessionError::Timeout(self.grace));
            }
            self.reader.get_ref().set_read_timeout(Some(deadline - now))?;
            match self.reader.read_line(&mut line) {
                Ok(0) => return Err(SessionError::Disconnected),
                Ok(_) if line.ends_with('\n') => {
                    if line.trim().is_empty() {
                        line.clear();
                        continue;
                    }
                    return Ok(decode_message(&line)?);
                }
                Ok(_) => continue,
                Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                    return Err(SessionError::Timeout(self.grace));
                }
                Err(e) if e.kind() == ErrorKind::Interrupted => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
}

impl Session for TcpSession {
    fn name(&self) -> &str {
        &self.name
    }

    fn send(&mut self, batch: Vec<Message>) -> Result<(), SessionError> {
        self.write_all(&batch)
    }

    fn receive(&mut self, time: GameTime) -> Result<Vec<Message>, SessionError> {
        let deadline = Instant::now() + self.grace;
        let mut out = Vec::new();
        loop {
            match self.read_message(deadline)? {
                Message::EndTurn { time: t } if t == time => return Ok(out),
                // A late end_turn from a turn we already gave up on.
                Message::EndTurn { .. } => continue,
                m => out.push(m),
            }
        }
    }
}
