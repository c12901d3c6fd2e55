#include "adbdiff/webdriver.hpp"

#include "httplib.h"
#include "json.hpp"

#include "adbdiff/errors.hpp"

namespace adbdiff::webdriver {
namespace {

using nlohmann::json;

// Raises the matching error for a WebDriver response: transport problems
// become IoError, protocol-level failures RemoteStatusError with the
// endpoint's error code.
json parse_response(const httplib::Result& result, const std::string& what) {
    if (!result)
        throw IoError(what + ": transport error (" + httplib::to_string(result.error()) + ")");
    json body;
    try {
        body = json::parse(result->body);
    } catch (const json::parse_error&) {
        throw RemoteStatusError("http " + std::to_string(result->status) + " with non-JSON body");
    }
    if (result->status < 200 || result->status >= 300) {
        std::string code = "http " + std::to_string(result->status);
        if (body.contains("value") && body["value"].is_object()) {
            const json& value = body["value"];
            if (value.contains("error")) code = value["error"].get<std::string>();
            if (value.contains("message"))
                throw RemoteStatusError(code + ": " + value["message"].get<std::string>());
        }
        throw RemoteStatusError(code);
    }
    return body;
}

httplib::Client make_http(const SessionConfig& config) {
    httplib::Client http(config.endpoint);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.request_timeout);
    time_t t = std::max<time_t>(1, seconds.count());
    http.set_connection_timeout(t, 0);
    http.set_read_timeout(t, 0);
    http.set_write_timeout(t, 0);
    return http;
}

}  // namespace

Client::Client(const SessionConfig& config) : config_(config) {
    json caps_doc;
    try {
        caps_doc = json::parse(config.capabilities.empty() ? "{}" : config.capabilities);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("capabilities document is not valid JSON: ") + e.what());
    }
    json request{{"capabilities", {{"alwaysMatch", caps_doc}}}};

    httplib::Client http = make_http(config_);
    json body = parse_response(http.Post("/session", request.dump(), "application/json"),
                               "new session at " + config_.endpoint);
    try {
        session_id_ = body.at("value").at("sessionId").get<std::string>();
    } catch (const json::exception&) {
        throw RemoteStatusError("new-session response carries no sessionId");
    }
}

Client::~Client() {
    if (session_id_.empty()) return;
    try {
        httplib::Client http = make_http(config_);
        http.Delete("/session/" + session_id_);
    } catch (...) {
        // Destructor cleanup is best effort by design.
    }
}

std::string Client::command(const std::string& method, const std::string& path,
                            const std::string& body) {
    httplib::Client http = make_http(config_);
    std::string url = "/session/" + session_id_ + path;
    httplib::Result result = method == "GET" ? http.Get(url)
                                             : http.Post(url, body, "application/json");
    json response = parse_response(result, method + " " + path);
    if (!response.contains("value")) return "";
    const json& value = response["value"];
    if (value.is_null()) return "";
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

void Client::navigate(const std::string& url) {
    command("POST", "/url", json{{"url", url}}.dump());
}

std::string Client::current_url() { return command("GET", "/url", ""); }

std::string Client::page_source() { return command("GET", "/source", ""); }

std::string Client::screenshot_png() {
    return base64_decode(command("GET", "/screenshot", ""));
}

std::string base64_decode(std::string_view text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    out.reserve(text.size() / 4 * 3);
    int buffer = 0, bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        int v = value_of(c);
        if (v < 0) throw ParseError(std::string("invalid base64 character '") + c + "'");
        buffer = (buffer << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
        }
    }
    return out;
}

}  // namespace adbdiff::webdriver
