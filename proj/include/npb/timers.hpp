#ifndef NPB_TIMERS_HPP
#define NPB_TIMERS_HPP

#include <array>

namespace npb {

// Monotonic wall-clock seconds.
double wtime();

// Indexed stopwatches in the style of the classic timer module.
class TimerSet {
public:
    static constexpr int kMaxTimers = 16;

    void clear(int i);
    void clear_all();
    void start(int i);
    void stop(int i);
    // accumulated seconds over all start/stop intervals
    double read(int i) const;

private:
    struct Slot {
        double elapsed = 0.0;
        double started = 0.0;
        bool running = false;
    };
    std::array<Slot, kMaxTimers> slots_{};
};

} // namespace npb

#endif
