#!/usr/bin/env python3
"""
Unit tests for the LLM client and the LLM-backed generator and validator.
The HTTP layer is mocked; no server is contacted.
"""

from unittest.mock import patch

import pytest
import requests

from src.api.llm_client import (
    GENERATOR_PROMPT,
    VALIDATOR_PROMPT,
    LLMClient,
    LLMContentGenerator,
    LLMTableValidator,
    parse_verdict,
)
from src.core.errors import ExternalClientError
from src.synth.content import Verdict
from src.tests.common.mocks import MockResponse, ollama_reply, openai_reply

SERVER = "http://llm.test:8080/"


@pytest.fixture
def client():
    return LLMClient(server_url=SERVER, model_name="test-model", api_key="secret", timeout=5)


def test_requires_server(monkeypatch):
    monkeypatch.setattr("src.api.llm_client.config.get", lambda key, default=None: default)
    with pytest.raises(ExternalClientError):
        LLMClient()


def test_rejects_unknown_format():
    with pytest.raises(ValueError):
        LLMClient(server_url=SERVER, api_format="grpc")


@patch("src.api.llm_client.requests.post")
def test_openai_request(mock_post, client):
    mock_post.return_value = openai_reply("  hello  ")
    assert client.generate("prompt", system_prompt="system") == "hello"

    args, kwargs = mock_post.call_args
    assert args[0] == "http://llm.test:8080/v1/chat/completions"
    assert kwargs["headers"]["Authorization"] == "Bearer secret"
    assert kwargs["timeout"] == 5
    body = kwargs["json"]
    assert body["model"] == "test-model"
    assert body["messages"] == [
        {"role": "system", "content": "system"},
        {"role": "user", "content": "prompt"},
    ]


@patch("src.api.llm_client.requests.post")
def test_no_key_no_auth_header(mock_post):
    mock_post.return_value = openai_reply("ok")
    LLMClient(server_url=SERVER, api_key="").generate("p")
    assert "Authorization" not in mock_post.call_args.kwargs["headers"]


@patch("src.api.llm_client.requests.post")
def test_falls_back_to_ollama(mock_post, client):
    mock_post.side_effect = [MockResponse(404, text="not found"), ollama_reply("from ollama")]
    assert client.generate("prompt") == "from ollama"
    assert mock_post.call_args_list[1].args[0] == "http://llm.test:8080/ollama/api/generate"
    assert client.api_format == "ollama"


@patch("src.api.llm_client.requests.post")
def test_every_format_fails(mock_post, client):
    mock_post.return_value = MockResponse(503, text="busy")
    with pytest.raises(ExternalClientError) as info:
        client.generate("prompt")
    assert info.value.status == 503
    assert mock_post.call_count == 2


@patch("src.api.llm_client.requests.post")
def test_transport_error(mock_post, client):
    mock_post.side_effect = requests.exceptions.ConnectionError("refused")
    with pytest.raises(ExternalClientError) as info:
        client.generate("prompt")
    assert info.value.exit_code == 3


@patch("src.api.llm_client.requests.post")
def test_unexpected_body(mock_post, client):
    mock_post.side_effect = [MockResponse(200, {"choices": []}), MockResponse(200, text="<html>")]
    with pytest.raises(ExternalClientError):
        client.generate("prompt")


@patch("src.api.llm_client.requests.post")
def test_generator_extracts_table(mock_post, client):
    table = "<table><tr><td>1</td></tr></table>"
    mock_post.return_value = openai_reply(f"Sure! Here it is:\n{table}\nAnything else?")
    structural = "<table><tr><td></td></tr></table>"
    assert LLMContentGenerator(client).populate(structural) == table
    prompt = mock_post.call_args.kwargs["json"]["messages"][0]["content"]
    assert prompt.startswith(GENERATOR_PROMPT)
    assert prompt.endswith(structural)


@patch("src.api.llm_client.requests.post")
def test_validator_uses_system_prompt(mock_post, client):
    mock_post.return_value = openai_reply('{"accept": false, "reason": "totals wrong"}')
    verdict = LLMTableValidator(client).judge("<table><tr><td>1</td></tr></table>")
    assert verdict == Verdict(False, "totals wrong")
    messages = mock_post.call_args.kwargs["json"]["messages"]
    assert messages[0] == {"role": "system", "content": VALIDATOR_PROMPT}


@pytest.mark.parametrize(
    "reply, expected",
    [
        ('{"accept": true, "reason": "fine"}', Verdict(True, "fine")),
        ('Verdict: {"accept": "yes"}', Verdict(True, "")),
        ('{"accept": false}', Verdict(False, "")),
        ("Yes, the table is coherent.", Verdict(True, "Yes, the table is coherent.")),
        ("REJECTED: header mismatch", Verdict(False, "REJECTED: header mismatch")),
        ("I am not sure", Verdict(False, "unparseable_verdict")),
        ("", Verdict(False, "unparseable_verdict")),
    ],
)
def test_parse_verdict(reply, expected):
    assert parse_verdict(reply) == expected
