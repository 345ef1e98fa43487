#include "provenir/subprocess.hpp"

#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "provenir/error.hpp"

extern char** environ;

namespace provenir {

namespace {

class Pipe {
public:
    Pipe() {
        if (::pipe2(fds_, O_CLOEXEC) != 0)
            throw Error(Errc::IoError, std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    Pipe(const Pipe&) = delete;
    Pipe& operator=(const Pipe&) = delete;

    int read_end() const { return fds_[0]; }
    int write_end() const { return fds_[1]; }
    void close_read() {
        if (fds_[0] >= 0) ::close(fds_[0]);
        fds_[0] = -1;
    }
    void close_write() {
        if (fds_[1] >= 0) ::close(fds_[1]);
        fds_[1] = -1;
    }

private:
    int fds_[2] = {-1, -1};
};

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::optional<std::filesystem::path>& cwd,
                          const std::string& input, const std::vector<std::string>& extra_env) {
    if (argv.empty()) throw Error(Errc::InvalidArgument, "empty argv");

    Pipe in, out, err;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.read_end(), STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.write_end(), STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.write_end(), STDERR_FILENO);
#if defined(__GLIBC__) && (__GLIBC__ > 2 || (__GLIBC__ == 2 && __GLIBC_MINOR__ >= 29))
    if (cwd) posix_spawn_file_actions_addchdir_np(&actions, cwd->c_str());
#else
    if (cwd) throw Error(Errc::InvalidArgument, "working directory change unsupported on this platform");
#endif

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    std::vector<std::string> env_storage;
    for (char** e = environ; *e != nullptr; ++e) env_storage.emplace_back(*e);
    for (const auto& e : extra_env) env_storage.push_back(e);
    std::vector<char*> envp;
    for (auto& e : env_storage) envp.push_back(e.data());
    envp.push_back(nullptr);

    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), envp.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw Error(Errc::IoError, "cannot start '" + argv[0] + "': " + std::strerror(rc));

    in.close_read();
    out.close_write();
    err.close_write();

    // Writes to a child that exited early must not kill us.
    struct sigaction ignore {}, previous {};
    ignore.sa_handler = SIG_IGN;
    sigaction(SIGPIPE, &ignore, &previous);

    ProcessResult result;
    std::size_t written = 0;
    if (input.empty()) in.close_write();
    else ::fcntl(in.write_end(), F_SETFL, O_NONBLOCK);

    char buffer[65536];
    bool out_open = true, err_open = true;
    while (out_open || err_open) {
        pollfd fds[3];
        nfds_t count = 0;
        int out_slot = -1, err_slot = -1, in_slot = -1;
        if (out_open) { fds[count] = {out.read_end(), POLLIN, 0}; out_slot = static_cast<int>(count++); }
        if (err_open) { fds[count] = {err.read_end(), POLLIN, 0}; err_slot = static_cast<int>(count++); }
        if (in.write_end() >= 0) { fds[count] = {in.write_end(), POLLOUT, 0}; in_slot = static_cast<int>(count++); }
        if (::poll(fds, count, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        auto drain = [&](int slot, int fd, std::string& sink, bool& open) {
            if (slot < 0 || fds[slot].revents == 0) return;
            const ssize_t n = ::read(fd, buffer, sizeof buffer);
            if (n > 0) sink.append(buffer, static_cast<std::size_t>(n));
            else if (n == 0 || (errno != EINTR && errno != EAGAIN)) open = false;
        };
        drain(out_slot, out.read_end(), result.out, out_open);
        drain(err_slot, err.read_end(), result.err, err_open);
        if (in_slot >= 0 && fds[in_slot].revents != 0) {
            const ssize_t n = ::write(in.write_end(), input.data() + written, input.size() - written);
            if (n > 0) written += static_cast<std::size_t>(n);
            if (n < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
            if (written >= input.size()) in.close_write();
        }
    }
    in.close_write();
    sigaction(SIGPIPE, &previous, nullptr);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    return result;
}

}  // namespace provenir
