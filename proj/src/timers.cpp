#include "npb/timers.hpp"

#include <cassert>
#include <ctime>

namespace npb {

double wtime()
{
    timespec ts;
    clock_gettime(CLOCK_MONOTONIC, &ts);
    return (double)ts.tv_sec + 1.0e-9 * (double)ts.tv_nsec;
}

void TimerSet::clear(int i)
{
    assert(i >= 0 && i < kMaxTimers);
    slots_[i] = Slot{};
}

void TimerSet::clear_all()
{
    for (int i = 0; i < kMaxTimers; i++)
        clear(i);
}

void TimerSet::start(int i)
{
    assert(i >= 0 && i < kMaxTimers);
    slots_[i].started = wtime();
    slots_[i].running = true;
}

void TimerSet::stop(int i)
{
    assert(i >= 0 && i < kMaxTimers);
    if (!slots_[i].running)
        return;
    slots_[i].elapsed += wtime() - slots_[i].started;
    slots_[i].running = false;
}

double TimerSet::read(int i) const
{
    assert(i >= 0 && i < kMaxTimers);
    return slots_[i].elapsed;
}

} // namespace npb
