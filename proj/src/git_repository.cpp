#include "reviewrank/git_repository.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <cstring>
#include <sstream>

extern char** environ;

namespace reviewrank {

namespace {

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fds, O_CLOEXEC) != 0) throw RepositoryError("pipe() failed");
    }
    ~Pipe() { close_all(); }
    void close_read() { close_fd(0); }
    void close_write() { close_fd(1); }
    void close_all() {
        close_fd(0);
        close_fd(1);
    }
    int release(int i) {
        int fd = fds[i];
        fds[i] = -1;
        return fd;
    }

private:
    void close_fd(int i) {
        if (fds[i] >= 0) ::close(fds[i]);
        fds[i] = -1;
    }
};

pid_t spawn(const std::vector<std::string>& argv, int stdin_fd, int stdout_fd) {
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    if (stdin_fd >= 0) posix_spawn_file_actions_adddup2(&actions, stdin_fd, STDIN_FILENO);
    else posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&actions, stdout_fd, STDOUT_FILENO);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = -1;
    int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw RepositoryError("cannot spawn " + argv[0] + ": " + std::strerror(rc));
    return pid;
}

bool read_exact(int fd, char* buf, std::size_t n) {
    while (n > 0) {
        ssize_t got = ::read(fd, buf, n);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) return false;
        buf += got;
        n -= static_cast<std::size_t>(got);
    }
    return true;
}

bool write_all(int fd, const char* buf, std::size_t n) {
    while (n > 0) {
        ssize_t put = ::write(fd, buf, n);
        if (put < 0 && errno == EINTR) continue;
        if (put <= 0) return false;
        buf += put;
        n -= static_cast<std::size_t>(put);
    }
    return true;
}

} // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
    Pipe out;
    pid_t pid = spawn(argv, -1, out.fds[1]);
    out.close_write();
    CommandResult result;
    char buf[8192];
    while (true) {
        ssize_t got = ::read(out.fds[0], buf, sizeof buf);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) break;
        result.out.append(buf, static_cast<std::size_t>(got));
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct GitRepository::BatchProcess {
    pid_t pid = -1;
    int to_child = -1;
    int from_child = -1;
    std::string buffer;

    explicit BatchProcess(const std::string& repo) {
        Pipe in, out;
        pid = spawn({"git", "-C", repo, "cat-file", "--batch"}, in.fds[0], out.fds[1]);
        in.close_read();
        out.close_write();
        to_child = in.release(1);
        from_child = out.release(0);
    }

    ~BatchProcess() {
        if (to_child >= 0) ::close(to_child);
        if (from_child >= 0) ::close(from_child);
        int status = 0;
        if (pid > 0)
            while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    }

    bool read_line(std::string& line) {
        while (true) {
            auto nl = buffer.find('\n');
            if (nl != std::string::npos) {
                line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                return true;
            }
            char chunk[4096];
            ssize_t got = ::read(from_child, chunk, sizeof chunk);
            if (got < 0 && errno == EINTR) continue;
            if (got <= 0) return false;
            buffer.append(chunk, static_cast<std::size_t>(got));
        }
    }

    bool read_bytes(std::string& into, std::size_t n) {
        std::size_t take = std::min(n, buffer.size());
        into.assign(buffer, 0, take);
        buffer.erase(0, take);
        if (take == n) return true;
        std::size_t offset = into.size();
        into.resize(n);
        return read_exact(from_child, into.data() + offset, n - offset);
    }

    // Returns {ok, content}; ok=false means the process is unusable.
    std::pair<bool, std::optional<std::string>> query(const std::string& spec) {
        std::string request = spec + "\n";
        if (!write_all(to_child, request.data(), request.size())) return {false, std::nullopt};
        std::string header;
        if (!read_line(header)) return {false, std::nullopt};
        // "<oid> <type> <size>" or "<spec> missing" / "<spec> ambiguous"
        std::istringstream hs(header);
        std::string oid, type;
        std::size_t size = 0;
        if (!(hs >> oid >> type >> size)) return {true, std::nullopt};
        std::string body;
        if (!read_bytes(body, size + 1)) return {false, std::nullopt};
        body.pop_back();
        if (type != "blob") return {true, std::nullopt};
        return {true, std::move(body)};
    }
};

GitRepository::GitRepository(std::string path) : path_(std::move(path)) {}

GitRepository::~GitRepository() = default;

bool GitRepository::is_repository(const std::string& path) {
    if (path.empty()) return false;
    auto r = run_command({"git", "-C", path, "rev-parse", "--git-dir"});
    return r.exit_code == 0;
}

std::shared_ptr<GitRepository> GitRepository::open(const std::string& path) {
    std::signal(SIGPIPE, SIG_IGN);
    if (!is_repository(path)) throw RepositoryError("repository snapshot unavailable: " + path);
    return std::shared_ptr<GitRepository>(new GitRepository(path));
}

std::optional<std::string> GitRepository::query_blob(const std::string& spec) const {
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (!batch_) batch_ = std::make_unique<BatchProcess>(path_);
        auto [ok, content] = batch_->query(spec);
        if (ok) return content;
        batch_.reset();
    }
    return std::nullopt;
}

std::optional<std::string> GitRepository::read_file_at(const std::string& commit, const std::string& path) const {
    if (commit.empty() || path.empty() || commit.find_first_of(" \t\n:") != std::string::npos ||
        path.find('\n') != std::string::npos)
        return std::nullopt;
    std::string spec = commit + ":" + path;
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(spec); it != memo_.end()) return it->second;
    auto content = query_blob(spec);
    memo_.emplace(spec, content);
    return content;
}

std::optional<std::string> GitRepository::resolve(const std::string& rev) const {
    auto r = run_command({"git", "-C", path_, "rev-parse", "--verify", "--quiet", rev + "^{commit}"});
    if (r.exit_code != 0) return std::nullopt;
    while (!r.out.empty() && (r.out.back() == '\n' || r.out.back() == '\r')) r.out.pop_back();
    return r.out;
}

std::vector<std::string> GitRepository::list_files(const std::string& rev) const {
    auto r = run_command({"git", "-C", path_, "ls-tree", "-r", "-z", "--name-only", rev});
    if (r.exit_code != 0) throw RepositoryError("repository snapshot unavailable: cannot list " + rev);
    std::vector<std::string> files;
    std::size_t start = 0;
    while (start < r.out.size()) {
        auto end = r.out.find('\0', start);
        if (end == std::string::npos) end = r.out.size();
        if (end > start) files.emplace_back(r.out.substr(start, end - start));
        start = end + 1;
    }
    return files;
}

} // namespace reviewrank
