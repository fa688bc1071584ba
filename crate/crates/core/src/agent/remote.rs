use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;

use super::Agent;
use crate::server::protocol::{decode_message, encode_message, Message};
use crate::server::{AgentScore, SessionError};

/// Plays one game over an established connection: joins, answers every
/// tick with the agent's requests and `end_turn`, and returns the final
/// score table.
pub fn run_remote_agent(agent: &mut dyn Agent, stream: TcpStream) -> Result<Vec<AgentScore>, SessionError> {
    stream.set_nodelay(true)?;
    let mut writer = stream.try_clone()?;
    let mut reader = BufReader::new(stream);
    let mut send = |msgs: &[Message]| -> Result<(), SessionError> {
        let mut buf = String::new();
        for m in msgs {
            buf.push_str(&encode_message(m));
            buf.push('\n');
        }
        writer.write_all(buf.as_bytes())?;
        writer.flush()?;
        Ok(())
    };
    send(&[Message::Join { agent_name: agent.name().to_string() }])?;

    let mut batch = Vec::new();
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(SessionError::Disconnected);
        }
        if line.trim().is_empty() {
            continue;
        }
        let msg = decode_message(&line)?;
        match msg {
            Message::GameEnd { scores } => return Ok(scores),
            Message::Tick { time, .. } => {
                batch.push(msg);
                let mut replies = agent.handle(&batch);
                batch.clear();
                replies.push(Message::EndTurn { time });
                send(&replies)?;
            }
            other => batch.push(other),
        }
    }
}
